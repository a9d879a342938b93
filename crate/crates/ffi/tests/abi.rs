use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use walklab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(walk_last_error()) }.to_str().unwrap().to_string()
}

const E1: [f64; 8] = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];

#[test]
fn coin_matrix_layout() {
    let mut coin = ptr::null_mut();
    unsafe {
        assert_eq!(walk_coin_fourier(WALK_SHIFT_MS, &mut coin), WalkStatus::Ok);
        let mut m = [0.0; 32];
        assert_eq!(walk_coin_matrix(coin, m.as_mut_ptr()), WalkStatus::Ok);
        // Entry (1,1) is i/2.
        assert_eq!((m[8 + 2], m[8 + 3]), (0.0, 0.5));
        walk_coin_free(coin);
    }
}

#[test]
fn coin_json_errors() {
    let mut coin = ptr::null_mut();
    let bad = CString::new(r#"{"shift":"ms","matrix":[[[2,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#).unwrap();
    unsafe {
        assert_eq!(walk_coin_from_json(bad.as_ptr(), &mut coin), WalkStatus::NotUnitary);
        assert!(coin.is_null());
        let junk = CString::new("not json").unwrap();
        assert_eq!(walk_coin_from_json(junk.as_ptr(), &mut coin), WalkStatus::Parse);
        assert_eq!(walk_coin_from_json(ptr::null(), &mut coin), WalkStatus::NullPointer);
        assert_eq!(walk_coin_grover(WALK_SHIFT_FF, ptr::null_mut()), WalkStatus::NullPointer);
    }
    assert!(last_error().contains("null"));
}

#[test]
fn state_lifecycle_and_measure() {
    unsafe {
        let mut coin = ptr::null_mut();
        let mut state = ptr::null_mut();
        let mut next = ptr::null_mut();
        assert_eq!(walk_coin_grover(WALK_SHIFT_MS, &mut coin), WalkStatus::Ok);
        assert_eq!(walk_state_initial(WALK_INIT_DELTA, E1.as_ptr(), 2, &mut state), WalkStatus::Ok);
        assert_eq!(walk_evolve(state, coin, 2, WALK_ENGINE_POSITION, &mut next), WalkStatus::Ok);
        let mut probs = [0.0; 4];
        assert_eq!(walk_state_measure(next, probs.as_mut_ptr(), 4), WalkStatus::Ok);
        assert!((probs[0] - 0.5).abs() < 1e-15 && (probs[3] - 0.5).abs() < 1e-15);
        assert_eq!(walk_state_measure(next, probs.as_mut_ptr(), 3), WalkStatus::InvalidArgument);
        let mut amp = [0.0; 8];
        assert_eq!(walk_state_amplitude(next, 2, 0, amp.as_mut_ptr()), WalkStatus::InvalidArgument);
        assert_eq!(walk_evolve(state, coin, 2, 7, &mut next), WalkStatus::InvalidArgument);
        walk_state_free(next);
        walk_state_free(state);
        walk_coin_free(coin);
        assert_eq!(walk_state_size(ptr::null()), 0);
        walk_state_free(ptr::null_mut());
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut state = ptr::null_mut();
        let alpha = [0.6, 0.0, 0.0, 0.0, 0.0, 0.8, 0.0, 0.0];
        assert_eq!(walk_state_initial(WALK_INIT_UNIFORM, alpha.as_ptr(), 3, &mut state), WalkStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(walk_state_to_json(state, &mut text), WalkStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(walk_state_from_json(text, &mut copy), WalkStatus::Ok);
        let mut csv_a = ptr::null_mut();
        let mut csv_b = ptr::null_mut();
        assert_eq!(walk_state_to_csv(state, &mut csv_a), WalkStatus::Ok);
        assert_eq!(walk_state_to_csv(copy, &mut csv_b), WalkStatus::Ok);
        assert_eq!(CStr::from_ptr(csv_a), CStr::from_ptr(csv_b));
        for s in [text, csv_a, csv_b] {
            walk_string_free(s);
        }
        walk_state_free(copy);
        walk_state_free(state);

        let unnormalised = [2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(walk_state_initial(WALK_INIT_DELTA, unnormalised.as_ptr(), 2, &mut state), WalkStatus::NotNormalized);
        assert_eq!(walk_state_initial(9, E1.as_ptr(), 2, &mut state), WalkStatus::InvalidArgument);
    }
}

#[test]
fn return_probability_series() {
    unsafe {
        let mut coin = ptr::null_mut();
        assert_eq!(walk_coin_fourier(WALK_SHIFT_FF, &mut coin), WalkStatus::Ok);
        let mut p = [f64::NAN; 6];
        assert_eq!(walk_return_probability(coin, E1.as_ptr(), 6, p.as_mut_ptr()), WalkStatus::Ok);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[1], 0.0);
        assert_eq!(walk_return_probability(coin, E1.as_ptr(), 0, p.as_mut_ptr()), WalkStatus::InvalidArgument);
        let mut flag = true;
        assert_eq!(walk_certificate(coin, 4, &mut flag, ptr::null_mut()), WalkStatus::InvalidArgument);
        walk_coin_free(coin);
    }
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libwalklab_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests").join("smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler is on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
