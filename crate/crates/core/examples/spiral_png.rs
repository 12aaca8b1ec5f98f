//! Write point clouds of the spiral and of circle images through the CLI.
//!
//! Usage: `cargo run --example spiral_png -- [OUT_DIR]`

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out".into());
    let code = spiralmap::cli::run([
        "spiralmap", "curve", "--A", "8", "--format", "png", "--curve-samples", "20000", "--out", &out,
    ]);
    std::process::exit(code);
}
