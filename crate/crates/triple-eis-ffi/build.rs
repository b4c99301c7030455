fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    std::fs::create_dir_all("include").expect("Unable to create include directory");
    let mut config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("TRIPLE_EIS_H".to_owned()),
        documentation: true,
        ..Default::default()
    };
    config.enumeration.rename_variants = cbindgen::RenameRule::QualifiedScreamingSnakeCase;
    cbindgen::Builder::new()
        .with_crate(".")
        .with_config(config)
        .generate()
        .expect("Unable to generate bindings")
        .write_to_file("include/triple_eis.h");
}
