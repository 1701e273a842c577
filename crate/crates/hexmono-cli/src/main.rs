use clap::Parser;
use hexmono_cli::cli::{run, Cli, Failure, EXIT_USAGE};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match run(cli, &mut stdout) {
        Ok(code) => code,
        Err(Failure::Usage(e)) | Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}
