use std::env;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    // Regenerate the committed header. If generation fails (for example
    // in an offline build of a fresh checkout), keep the committed copy.
    let config =
        cbindgen::Config::from_file(format!("{crate_dir}/cbindgen.toml")).unwrap_or_default();
    match cbindgen::Builder::new()
        .with_config(config)
        .with_crate(&crate_dir)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/wfcheck.h"));
        }
        Err(e) => {
            println!("cargo:warning=cbindgen failed ({e}); using the committed header");
        }
    }
}
