//! Compile and run a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "k3deg2.h"

int main(void) {
    K3Vector *v = NULL;
    const char *text = "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,6,0,10,8,30,14,22";
    if (k3_vector_parse(text, &v) != K3_STATUS_OK) return 10;
    int64_t norm = 0;
    if (k3_vector_norm(v, &norm) != K3_STATUS_OK || norm != 38) return 11;
    char *label = NULL;
    if (k3_vector_label(v, &label) != K3_STATUS_OK || strcmp(label, "^A18-") != 0) return 12;
    k3_string_free(label);
    K3Sphere *s = NULL;
    if (k3_sphere_build(v, &s) != K3_STATUS_OK) return 13;
    if (k3_sphere_charge(s) != 24) return 14;
    k3_sphere_free(s);
    k3_vector_free(v);
    if (k3_vector_parse("1,2", &v) != K3_STATUS_PARSE) return 15;
    if (k3_last_error() == NULL) return 16;
    printf("ok\n");
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let lib = target_dir().join("libk3deg2_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("k3deg2-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&dir);
}
