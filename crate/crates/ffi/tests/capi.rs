use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cullis_ffi::*;

fn det_text(m: *const CullisMatrix, algo: CullisAlgorithm) -> Result<String, CullisStatus> {
    let mut buf = [0 as c_char; 128];
    let mut len = 0;
    let status = unsafe { cullis_matrix_det(m, algo, buf.as_mut_ptr(), buf.len(), &mut len) };
    if status != CullisStatus::Ok {
        return Err(status);
    }
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string();
    assert_eq!(s.len(), len);
    Ok(s)
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let mut len = 0;
    assert_eq!(unsafe { cullis_last_error(buf.as_mut_ptr(), buf.len(), &mut len) }, CullisStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

fn parse(text: &str) -> *mut CullisMatrix {
    let text = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cullis_matrix_parse(text.as_ptr(), &mut m) }, CullisStatus::Ok);
    m
}

#[test]
fn matrix_handles() {
    let m = parse("3 2 Q\n1 0\n0 1\n0 0\n");
    let (mut rows, mut cols, mut rank) = (0, 0, 0);
    unsafe {
        assert_eq!(cullis_matrix_shape(m, &mut rows, &mut cols), CullisStatus::Ok);
        assert_eq!(cullis_matrix_rank(m, &mut rank), CullisStatus::Ok);
    }
    assert_eq!((rows, cols, rank), (3, 2, 2));
    for algo in [CullisAlgorithm::Injection, CullisAlgorithm::Minor, CullisAlgorithm::Laplace] {
        assert_eq!(det_text(m, algo).unwrap(), "1");
    }
    unsafe { cullis_matrix_free(m) };
}

#[test]
fn errors_carry_status_and_message() {
    let wide = parse("2 3 F5\n1 2 3\n4 0 1\n");
    assert_eq!(det_text(wide, CullisAlgorithm::Minor), Err(CullisStatus::Shape));
    assert!(last_error().contains("n >= k"));
    unsafe { cullis_matrix_free(wide) };

    let bad = CString::new("2 2 Q\n1 2\n3 x\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cullis_matrix_parse(bad.as_ptr(), &mut m) }, CullisStatus::Parse);
    assert!(m.is_null());
    assert!(last_error().starts_with("line 3"));

    assert_eq!(det_text(ptr::null(), CullisAlgorithm::Minor), Err(CullisStatus::NullArgument));
    unsafe { cullis_matrix_free(ptr::null_mut()) };
}

#[test]
fn short_buffers_report_the_needed_length() {
    let m = parse("1 1 Q\n-22/7\n");
    let mut buf = [0 as c_char; 4];
    let mut len = 0;
    let status = unsafe { cullis_matrix_det(m, CullisAlgorithm::Injection, buf.as_mut_ptr(), buf.len(), &mut len) };
    assert_eq!((status, len), (CullisStatus::BufferTooSmall, 5));
    assert_eq!(det_text(m, CullisAlgorithm::Injection).unwrap(), "-22/7");
    unsafe { cullis_matrix_free(m) };
}

#[test]
fn varieties() {
    // x1 - x2 + x3 = 0 over F2 annihilates det_{3,1}; x1 + x2 = 0 over F3 does not annihilate det_{2,1}
    for (text, codim, annihilates) in
        [("space 3 1\n1 3 F2\n1 1 1\nb: 0\n", 1, true), ("space 2 1\n1 2 F3\n1 1\nb: 0\n", 1, false)]
    {
        let text = CString::new(text).unwrap();
        let mut v = ptr::null_mut();
        let (mut c, mut a) = (0, !annihilates);
        unsafe {
            assert_eq!(cullis_variety_parse(text.as_ptr(), &mut v), CullisStatus::Ok);
            assert_eq!(cullis_variety_codim(v, &mut c), CullisStatus::Ok);
            assert_eq!(cullis_variety_annihilates(v, &mut a), CullisStatus::Ok);
            cullis_variety_free(v);
        }
        assert_eq!((c, a), (codim, annihilates));
    }
    let empty = CString::new("space 1\n2 1 Q\n1\n1\nb: 0 1\n").unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { cullis_variety_parse(empty.as_ptr(), &mut v) }, CullisStatus::EmptyVariety);
}

#[test]
fn sweeps_produce_reports() {
    let mut r = ptr::null_mut();
    let opts = CullisSweepOptions { jobs: 2, ..cullis_sweep_options_default() };
    unsafe {
        assert_eq!(cullis_verify_codim_bound(4, 2, 2, &opts, &mut r), CullisStatus::Ok);
        assert!(cullis_report_passed(r));
        assert_eq!((cullis_report_cases(r), cullis_report_counterexamples(r)), (511, 0));
        let mut len = 0;
        assert_eq!(cullis_report_records(r, ptr::null_mut(), 0, &mut len), CullisStatus::BufferTooSmall);
        let mut buf = vec![0 as c_char; len + 1];
        assert_eq!(cullis_report_records(r, buf.as_mut_ptr(), buf.len(), &mut len), CullisStatus::Ok);
        let records = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(records.starts_with(r#"{"cases":511,"check":"codim-bound""#), "{records}");
        cullis_report_free(r);

        assert_eq!(cullis_verify_characterization(3, 1, 3, ptr::null(), &mut r), CullisStatus::Ok);
        assert!(cullis_report_passed(r));
        cullis_report_free(r);
        assert_eq!(cullis_verify_z_condition(4, 2, 3, ptr::null(), &mut r), CullisStatus::Ok);
        assert!(cullis_report_passed(r));
        cullis_report_free(r);
        assert_eq!(cullis_verify_characterization(3, 2, 2, ptr::null(), &mut r), CullisStatus::Hypothesis);
        assert!(!cullis_report_passed(ptr::null()));
    }
}

/// `target/<profile>`, where cargo leaves the static library.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = profile_dir().join("libcullis_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cullis_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    // 3x2 minors: rows 12 give -2, rows 13 give 1/2, rows 23 give 3/2, signed + - +
    assert_eq!(stdout, "det -1\ndet -1\ndet -1\npassed 1 cases 511\nerror line 3: expected 2 rows, found 1\n");
}
