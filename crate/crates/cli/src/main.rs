use std::io;

use baire_games_cli::commands::{execute, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    let code = execute(cli, &mut io::stdin().lock(), &mut io::stdout().lock());
    std::process::exit(code);
}
