//! Compiles and runs the C client in `tests/smoke.c` against the built
//! static library and generated header.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_client_builds_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let workspace = manifest.join("../..").canonicalize().unwrap();

    // make sure the staticlib and header exist (cargo test only builds the
    // rlib for the harness itself)
    let cargo = env!("CARGO");
    let status = Command::new(cargo)
        .args(["build", "-p", "mtr-ffi"])
        .current_dir(&workspace)
        .status()
        .unwrap();
    assert!(status.success(), "building the ffi library failed");

    let static_lib = workspace.join("target/debug/libmtr_ffi.a");
    let header_dir = manifest.join("include");
    assert!(static_lib.exists(), "missing {}", static_lib.display());
    assert!(header_dir.join("mtr.h").exists(), "missing generated header");

    let dir = tempfile::tempdir().unwrap();
    let binary = dir.path().join("smoke");
    let compile = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(&header_dir)
        .arg(&static_lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "cc failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let dataset = workspace.join("datasets/edm.arff");
    let model_out = dir.path().join("model.json");
    let run = Command::new(&binary)
        .arg(&dataset)
        .arg(&model_out)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "smoke binary failed:\nstdout: {stdout}\nstderr: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("ok"), "unexpected output: {stdout}");
    assert!(model_out.exists());
}
