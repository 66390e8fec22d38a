use std::ffi::{CStr, CString};
use std::ptr;

use farey_lab_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fl_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = fl_last_error_message();
    (!p.is_null()).then(|| take_string(p))
}

fn farey(level: u32) -> *mut FlGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fl_farey_build(level, &mut g) }, FlStatus::Ok);
    g
}

#[test]
fn farey_counts_match_the_closed_form() {
    for n in 1..=6u32 {
        let g = farey(n);
        unsafe {
            assert_eq!(fl_graph_vertex_count(g), 1 << (n + 1));
            assert_eq!(fl_graph_edge_count(g), (1 << (n + 2)) - 3);
            let mut member = false;
            assert_eq!(fl_k_check(g, &mut member, ptr::null_mut()), FlStatus::Ok);
            assert!(member);
            fl_graph_free(g);
        }
    }
}

#[test]
fn json_round_trip_and_edges() {
    let edges = [0usize, 1, 1, 2, 2, 0, 2, 3];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fl_graph_new(4, edges.as_ptr(), 4, &mut g), FlStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(fl_graph_to_json(g, &mut text), FlStatus::Ok);
        let text = CString::new(take_string(text)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(fl_graph_from_json(text.as_ptr(), &mut h), FlStatus::Ok);
        assert_eq!(fl_graph_edge_count(h), 4);
        let mut adj = false;
        assert_eq!(fl_graph_has_edge(h, 3, 2, &mut adj), FlStatus::Ok);
        assert!(adj);
        assert_eq!(fl_graph_has_edge(h, 3, 0, &mut adj), FlStatus::Ok);
        assert!(!adj);
        assert_eq!(fl_graph_has_edge(h, 3, 9, &mut adj), FlStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("unknown vertex 9"));
        fl_graph_free(g);
        fl_graph_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut g = ptr::null_mut();
    unsafe {
        let bad = CString::new("{\"vertex_count\": 2, \"edges\": [[0, 0]]}").unwrap();
        assert_eq!(fl_graph_from_json(bad.as_ptr(), &mut g), FlStatus::InvalidJson);
        assert!(last_error().unwrap().contains("self-loop"));
        assert!(g.is_null());

        let garbage = CString::new("{").unwrap();
        assert_eq!(fl_graph_from_json(garbage.as_ptr(), &mut g), FlStatus::InvalidJson);

        let invalid = [0xffu8, 0];
        assert_eq!(fl_graph_from_json(invalid.as_ptr().cast(), &mut g), FlStatus::InvalidUtf8);

        assert_eq!(fl_graph_from_json(ptr::null(), &mut g), FlStatus::NullPointer);
        assert_eq!(fl_farey_build(0, &mut g), FlStatus::InvalidArgument);
        assert_eq!(fl_farey_build(40, &mut g), FlStatus::CapExceeded);
        assert_eq!(fl_farey_build(2, ptr::null_mut()), FlStatus::NullPointer);

        // a successful call clears the message
        g = farey(1);
        assert!(last_error().is_none());
        assert_eq!(fl_graph_vertex_count(ptr::null()), 0);
        fl_graph_free(g);
        fl_graph_free(ptr::null_mut());
        fl_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fl_farey_build(0, &mut g) }, FlStatus::InvalidArgument);
    std::thread::spawn(|| assert!(last_error().is_none())).join().unwrap();
    assert!(last_error().is_some());
}

#[test]
fn chordless_square_report_names_the_stuck_set() {
    let edges = [0usize, 1, 1, 2, 2, 3, 3, 0];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fl_graph_new(4, edges.as_ptr(), 4, &mut g), FlStatus::Ok);
        let mut member = true;
        let mut report = ptr::null_mut();
        assert_eq!(fl_k_check(g, &mut member, &mut report), FlStatus::Ok);
        assert!(!member);
        let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(v["violation"]["no_removable_vertex"], serde_json::json!([0, 1, 2, 3]));
        fl_graph_free(g);
    }
}

#[test]
fn strength_closure_and_independence() {
    let g = farey(1);
    unsafe {
        let mut strong = true;
        assert_eq!(fl_is_strong(g, [2usize, 3].as_ptr(), 2, &mut strong), FlStatus::Ok);
        assert!(!strong);
        assert_eq!(fl_is_strong(g, [0usize, 1].as_ptr(), 2, &mut strong), FlStatus::Ok);
        assert!(strong);
        assert_eq!(fl_is_strong(g, ptr::null(), 0, &mut strong), FlStatus::Ok);
        assert!(strong);

        let mut closure = ptr::null_mut();
        assert_eq!(fl_acl(g, [2usize, 3].as_ptr(), 2, &mut closure), FlStatus::Ok);
        assert_eq!(take_string(closure), "[0,1,2,3]");

        let mut indep = true;
        let (a, b, c) = ([0usize, 1], [2usize], [3usize]);
        assert_eq!(
            fl_is_independent(g, b.as_ptr(), 1, a.as_ptr(), 2, c.as_ptr(), 1, &mut indep),
            FlStatus::Ok
        );
        assert!(indep);
        assert_eq!(
            fl_is_independent(g, b.as_ptr(), 1, ptr::null(), 0, c.as_ptr(), 1, &mut indep),
            FlStatus::Ok
        );
        assert!(!indep);
        fl_graph_free(g);
    }
}

#[test]
fn amalgamation() {
    let tri = [0usize, 1, 1, 2, 0, 2];
    let mut t = ptr::null_mut();
    let f1 = farey(1);
    let glue = [0usize, 1];
    unsafe {
        assert_eq!(fl_graph_new(3, tri.as_ptr(), 3, &mut t), FlStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(fl_amalgamate(t, f1, glue.as_ptr(), glue.as_ptr(), 2, false, &mut m), FlStatus::Ok);
        assert_eq!(fl_graph_vertex_count(m), 4);
        fl_graph_free(m);
        assert_eq!(fl_amalgamate(t, f1, glue.as_ptr(), glue.as_ptr(), 2, true, &mut m), FlStatus::Ok);
        assert_eq!(fl_graph_vertex_count(m), 5);
        fl_graph_free(m);
        let apexes = [2usize, 3];
        assert_eq!(
            fl_amalgamate(f1, f1, apexes.as_ptr(), apexes.as_ptr(), 2, false, &mut m),
            FlStatus::InvalidArgument
        );
        assert!(last_error().unwrap().contains("not strong"));
        fl_graph_free(t);
        fl_graph_free(f1);
    }
}

#[test]
fn catalog_and_predicates() {
    let mut cat = ptr::null_mut();
    let g = farey(3);
    unsafe {
        assert_eq!(fl_catalog_new(6, &mut cat), FlStatus::Ok);
        assert_eq!(fl_catalog_len(cat), 4);
        let mut text = ptr::null_mut();
        assert_eq!(fl_catalog_to_json(cat, &mut text), FlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
        assert_eq!(v["types"][0]["name"], "lozenge");

        let lozenge = CString::new("lozenge").unwrap();
        let mut holds = false;
        assert_eq!(fl_eval_p_c(g, cat, lozenge.as_ptr(), 2, 3, &mut holds), FlStatus::Ok);
        assert!(holds);
        assert_eq!(fl_eval_p_delta(g, cat, lozenge.as_ptr(), 2, 3, &mut holds), FlStatus::Ok);
        assert!(holds);
        let two = CString::new("lozenge,lozenge").unwrap();
        assert_eq!(fl_eval_p_delta(g, cat, two.as_ptr(), 2, 3, &mut holds), FlStatus::Ok);
        assert!(!holds);
        let unknown = CString::new("hexagon").unwrap();
        assert_eq!(fl_eval_p_c(g, cat, unknown.as_ptr(), 2, 3, &mut holds), FlStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("hexagon"));
        fl_catalog_free(cat);
        fl_graph_free(g);
    }
}

#[test]
fn header_declares_the_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/farey_lab.h")).unwrap();
    for name in [
        "fl_last_error_message",
        "fl_string_free",
        "fl_graph_new",
        "fl_graph_from_json",
        "fl_graph_free",
        "fl_farey_build",
        "fl_k_check",
        "fl_amalgamate",
        "fl_eval_p_delta",
        "typedef struct FlGraph FlGraph",
        "FL_STATUS_NULL_POINTER = 1",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
