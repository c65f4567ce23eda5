use clap::Parser;

use casimir::cli::{run, thread_count, Cli, EXIT_CONFIG};

fn main() {
    let cli = Cli::parse();
    match thread_count(std::env::var("CASIMIR_THREADS").ok().as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("{}", serde_json::json!({"error": "Threads", "message": e.to_string()}));
                std::process::exit(EXIT_CONFIG);
            }
        }
        Ok(None) => {}
        Err(m) => {
            eprintln!("{}", serde_json::json!({"error": "InvalidConfig", "path": "CASIMIR_THREADS", "message": m}));
            std::process::exit(EXIT_CONFIG);
        }
    }
    std::process::exit(run(&cli));
}
