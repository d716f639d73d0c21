use std::process::ExitCode;

use ahaut_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    let (text, code) = run(&cli);
    if text.ends_with('\n') {
        print!("{text}");
    } else {
        println!("{text}");
    }
    if code != 0 {
        eprintln!("ahaut: exit {code}");
    }
    ExitCode::from(code as u8)
}
