//! Time sampling and training on random graphs of growing size and fit the
//! log-log slope. Sizes come from the command line.

use rolewalk::bench::{er_runner, run_bench};
use rolewalk::pipeline::RunConfig;

fn main() -> rolewalk::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut sizes: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if sizes.is_empty() {
        sizes = vec![500, 1000, 2000, 4000];
    }
    let report = run_bench(&sizes, er_runner(10.0, RunConfig::default(), 0));
    report.write_csv(std::io::stdout())?;
    println!("time slope {:?}, memory slope {:?}", report.time_slope, report.memory_slope);
    Ok(())
}
