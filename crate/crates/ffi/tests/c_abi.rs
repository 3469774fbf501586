use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "trisqrt.h"

int main(void) {
    TrisqrtConfig *cfg = NULL;
    if (trisqrt_config_new(11, 4, 20, 12, 12, &cfg) != TRISQRT_STATUS_INVALID_INPUT) return 1;
    if (cfg != NULL) return 2;

    if (trisqrt_config_new(13, 4, 24, 12, 12, &cfg) != TRISQRT_STATUS_OK) return 3;
    TrisqrtReport *rep = NULL;
    TrisqrtStatus st = trisqrt_verify(cfg, &rep);
    if (st != TRISQRT_STATUS_OK) { fprintf(stderr, "%s\n", trisqrt_last_error()); return 4; }
    if (trisqrt_report_verdict(rep) != 1) return 5;
    if (strstr(trisqrt_report_json(rep), "\"schema\":1") == NULL) return 6;
    trisqrt_report_free(rep);
    trisqrt_config_free(cfg);

    if (trisqrt_config_new(11, 4, 24, 12, 12, &cfg) != TRISQRT_STATUS_OK) return 7;
    rep = NULL;
    if (trisqrt_verify(cfg, &rep) != TRISQRT_STATUS_NOT_ORDINARY || rep != NULL) return 8;
    if (strncmp(trisqrt_last_error(), "hida", 4) != 0) return 9;
    trisqrt_config_free(cfg);

    TrisqrtQExp *d = NULL;
    char buf[32];
    size_t need = 0;
    if (trisqrt_qexp_delta(10, &d) != TRISQRT_STATUS_OK) return 10;
    if (trisqrt_qexp_coeff(d, 2, buf, sizeof buf, &need) != TRISQRT_STATUS_OK || strcmp(buf, "-24") != 0) return 11;
    if (trisqrt_qexp_coeff(d, 11, buf, sizeof buf, &need) != TRISQRT_STATUS_INSUFFICIENT_PRECISION) return 12;
    trisqrt_qexp_free(d);

    if (trisqrt_hensel_unit_root("7", 11, 12, 4, buf, sizeof buf, &need) != TRISQRT_STATUS_OK) return 13;
    if (trisqrt_hensel_unit_root("22", 11, 12, 4, buf, sizeof buf, &need) != TRISQRT_STATUS_NOT_ORDINARY) return 14;
    puts("ok");
    return 0;
}
"#;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn scratch() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_abi");
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn header_is_valid_c() {
    let src = scratch().join("syntax.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc").arg("-std=c99").arg("-Wall").arg("-Werror").arg("-fsyntax-only").arg("-I").arg(header_dir()).arg(&src).output().expect("cc");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    // the static library sits next to this test binary
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libtrisqrt_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = scratch();
    let src = dir.join("run.c");
    let exe = dir.join("run");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("cc");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
