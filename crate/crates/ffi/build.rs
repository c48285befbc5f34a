fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let out = std::path::Path::new(&crate_dir)
        .join("include")
        .join("beamnet.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("BEAMNET_H".to_string()),
        cpp_compat: true,
        documentation: true,
        header: Some(
            "/* C interface to the beamnet directional-network analysis library. */".to_string(),
        ),
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation failed")
        .write_to_file(out);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
