//! Writes every catalog pattern to `patterns/<name>.json`.
//!
//! Usage: `cargo run -p mbqc-core --example export_patterns [DIR]`

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../patterns")
    });
    std::fs::create_dir_all(&dir)?;
    for entry in mbqc_core::algorithms::catalog() {
        let path = dir.join(format!("{}.json", entry.pattern.name));
        std::fs::write(&path, entry.pattern.to_json() + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
