use std::sync::Arc;

use quasar_workbench::{cli, SystemClock};

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = cli::run(
        std::env::args_os(),
        Arc::new(SystemClock),
        &mut stdout.lock(),
        &mut stderr.lock(),
    );
    std::process::exit(code);
}
