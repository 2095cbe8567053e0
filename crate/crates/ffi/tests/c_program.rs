//! Compiles a small C program against the generated header and static
//! library and runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "cyclohom.h"

int main(void) {
    CyclohomPoly *p = NULL;
    if (cyclohom_cyclotomic(105, &p) != CYCLOHOM_STATUS_OK) return 10;
    int64_t c = 0;
    if (cyclohom_poly_coefficient(p, 7, &c) != CYCLOHOM_STATUS_OK || c != -2) return 11;
    char buf[512];
    size_t needed = 0;
    if (cyclohom_poly_to_string(p, buf, sizeof buf, &needed) != CYCLOHOM_STATUS_OK) return 12;
    cyclohom_poly_free(p);
    if (cyclohom_cyclotomic(0, &p) != CYCLOHOM_STATUS_INVALID_ARGUMENT) return 13;
    if (cyclohom_last_error(buf, sizeof buf, &needed) != CYCLOHOM_STATUS_OK || needed < 2) return 14;
    CyclohomReport *r = NULL;
    if (cyclohom_verify(15, "main,signs", 0, &r) != CYCLOHOM_STATUS_OK) return 15;
    if (!cyclohom_report_passed(r)) return 16;
    cyclohom_report_free(r);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcyclohom_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("cyclohom_smoke.c");
    let bin = tmp.join("cyclohom_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
