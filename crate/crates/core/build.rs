// Embeds every asset file so the catalog works without the source tree.

use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn list(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fs::read_dir(dir)
        .map(|it| {
            it.filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "txt"))
                .map(|p| {
                    let name = p.file_name().unwrap().to_string_lossy().into_owned();
                    (
                        name,
                        p.canonicalize().unwrap().to_string_lossy().into_owned(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn main() {
    let root = Path::new(&env::var("CARGO_MANIFEST_DIR").unwrap()).join("assets");
    let mut out = String::new();
    for (constant, sub) in [
        ("EMBEDDED_CATALOG", "catalog"),
        ("EMBEDDED_TABLES", "tables"),
    ] {
        let dir = root.join(sub);
        println!("cargo:rerun-if-changed={}", dir.display());
        writeln!(out, "static {constant}: &[(&str, &str)] = &[").unwrap();
        for (name, path) in list(&dir) {
            println!("cargo:rerun-if-changed={path}");
            writeln!(out, "    ({name:?}, include_str!({path:?})),").unwrap();
        }
        writeln!(out, "];").unwrap();
    }
    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("embedded_assets.rs");
    fs::write(dest, out).unwrap();
}
