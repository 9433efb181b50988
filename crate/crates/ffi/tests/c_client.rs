use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libiorel_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("iorel_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());

    let text = String::from_utf8(out.stdout).unwrap();
    let parts: Vec<f64> = text.split_whitespace().map(|t| t.parse().unwrap()).collect();
    let stack = iorel::load_stack(
        "[medium0]\nmodel = \"constant\"\neps_re = 1.0\n[[layers]]\nthickness_m = 2e-7\nmaterial = { model = \"constant\", eps_re = 2.0, eps_im = 0.5 }\n[mediumN]\nmodel = \"constant\"\neps_re = 1.0\n",
    )
    .unwrap();
    let ctx = iorel::ModeContext::new(&stack, 2e15, 2e6).unwrap();
    let r = iorel::scatter_set(&ctx, iorel::Polarization::S).unwrap().r0n;
    assert_eq!(parts, vec![r.re, r.im]);
}
