use clap::{CommandFactory, FromArgMatches};

use blowuplab_cli::cli::Cli;
use blowuplab_cli::{config, run};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    // after_help carries the config-key table, so --help documents every
    // default. clap itself exits 2 on usage errors.
    let command = Cli::command().after_help(config::keys_help());
    let matches = command.get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match run::execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
