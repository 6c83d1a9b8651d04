fn main() {
    if let Some(n) = std::env::var("HOMNAMBU_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let code = homnambu_cli::run(std::env::args().skip(1).collect());
    std::process::exit(code);
}
