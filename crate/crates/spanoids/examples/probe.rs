//! Times each reproduction criterion and prints the pass/fail table.

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let reports = if args.is_empty() {
        spanoids::repro::run_all()
    } else {
        args.iter()
            .map(|a| spanoids::repro::run_criterion(a.parse().expect("criterion index")))
            .collect()
    };
    print!("{}", spanoids::repro::render_table(&reports));
}
