//! Regenerate the shipped fixture files:
//! `cargo run -p difmor-cli --example write_fixtures -- fixtures/`

use std::path::PathBuf;

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures".to_string())
        .into();
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (name, file) in difmor_cli::fixtures::shipped() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, file.to_json() + "\n").expect("write fixture");
        println!("wrote {}", path.display());
    }
}
