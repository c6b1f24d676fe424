use clap::Parser;

use codetrim::cli::{run, Cli};

// Die quietly when a downstream pipe closes, like any other filter.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() {
    reset_sigpipe();
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(())) => {}
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
        Err(_) => {
            eprintln!("error: internal failure");
            std::process::exit(3);
        }
    }
}
