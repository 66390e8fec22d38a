//! C ABI over `farey-lab`.
//!
//! Every fallible function returns an [`FlStatus`] and writes its result
//! through an out-pointer. On failure a message is stored per thread and can
//! be fetched with [`fl_last_error_message`]. Strings handed out by this
//! library are released with [`fl_string_free`]; graphs and catalogs have
//! their own free functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use farey_lab::amalgam::{amalgamate_in_k, free_amalgam, Glue};
use farey_lab::decomp::{acl, is_independent};
use farey_lab::farey::build_level;
use farey_lab::kclass::{is_in_k, is_strong};
use farey_lab::lprime::{enumerate_cycle_types, eval_p_c, eval_p_delta, CycleCatalog};
use farey_lab::{Error, Graph, VertexId};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidArgument = 4,
    CapExceeded = 5,
    Panic = 6,
}

/// Opaque undirected simple graph.
pub struct FlGraph(Graph);

/// Opaque catalog of cycle types.
pub struct FlCatalog(CycleCatalog);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(FlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::SizeCap { .. } | Error::LevelCap { .. } | Error::LevelOverflow(_) => FlStatus::CapExceeded,
            _ => FlStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(FlStatus::InvalidJson, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FlStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into [`FlStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FlStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn vertices<'a>(p: *const usize, len: usize, what: &str) -> Result<&'a [VertexId], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(FlStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_c_string(s: String) -> *mut c_char {
    // serde_json never emits interior NULs
    CString::new(s).expect("no interior NUL").into_raw()
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Copy of the last error message on this thread, or NULL if the last call succeeded.
///
/// The returned string must be released with [`fl_string_free`].
#[no_mangle]
pub extern "C" fn fl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph from `edge_count` pairs laid out flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be NULL when
/// `edge_count` is 0); `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_new(
    vertex_count: usize,
    edges: *const usize,
    edge_count: usize,
    out_graph: *mut *mut FlGraph,
) -> FlStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let len = edge_count
            .checked_mul(2)
            .ok_or_else(|| Fail(FlStatus::InvalidArgument, "edge_count overflows".into()))?;
        let flat = vertices(edges, len, "edges")?;
        let g = Graph::new(vertex_count, flat.chunks(2).map(|p| (p[0], p[1])))?;
        *slot = boxed(FlGraph(g));
        Ok(())
    })
}

/// Parses a graph from `{"vertex_count": n, "edges": [[u, v], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_from_json(json: *const c_char, out_graph: *mut *mut FlGraph) -> FlStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let g: Graph = serde_json::from_str(text(json, "json")?)?;
        *slot = boxed(FlGraph(g));
        Ok(())
    })
}

/// Serialises a graph to JSON. Free the result with [`fl_string_free`].
///
/// # Safety
/// `graph` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_to_json(graph: *const FlGraph, out_json: *mut *mut c_char) -> FlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let g = borrow(graph, "graph")?;
        *slot = to_c_string(serde_json::to_string(&g.0)?);
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_free(graph: *mut FlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_vertex_count(graph: *const FlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Number of edges, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_edge_count(graph: *const FlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `graph` must be a live handle; `out_adjacent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_graph_has_edge(
    graph: *const FlGraph,
    u: usize,
    v: usize,
    out_adjacent: *mut bool,
) -> FlStatus {
    guard(|| {
        let slot = out(out_adjacent, "out_adjacent")?;
        let g = &borrow(graph, "graph")?.0;
        for w in [u, v] {
            if !g.contains_vertex(w) {
                return Err(Error::UnknownVertex { vertex: w, vertex_count: g.vertex_count() }.into());
            }
        }
        *slot = g.has_edge(u, v);
        Ok(())
    })
}

/// Builds the Farey graph of the given level (at least 1).
///
/// # Safety
/// `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_farey_build(level: u32, out_graph: *mut *mut FlGraph) -> FlStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        *slot = boxed(FlGraph(build_level(level)?.into_graph()));
        Ok(())
    })
}

/// Decides membership in the class K.
///
/// When `out_report` is not NULL it receives the JSON report with its peel or
/// violation witness, to be released with [`fl_string_free`].
///
/// # Safety
/// `graph` must be a live handle; `out_member` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_k_check(
    graph: *const FlGraph,
    out_member: *mut bool,
    out_report: *mut *mut c_char,
) -> FlStatus {
    guard(|| {
        let slot = out(out_member, "out_member")?;
        let report = is_in_k(&borrow(graph, "graph")?.0);
        if let Some(r) = out_report.as_mut() {
            *r = to_c_string(serde_json::to_string(&report)?);
        }
        *slot = report.member;
        Ok(())
    })
}

/// Tests whether the vertex set is strong in the graph.
///
/// # Safety
/// `set` must point to `set_len` readable ids; `out_strong` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_is_strong(
    graph: *const FlGraph,
    set: *const usize,
    set_len: usize,
    out_strong: *mut bool,
) -> FlStatus {
    guard(|| {
        let slot = out(out_strong, "out_strong")?;
        let a = vertices(set, set_len, "set")?;
        *slot = is_strong(a, &borrow(graph, "graph")?.0)?.is_strong();
        Ok(())
    })
}

/// Algebraic closure of a vertex set, written as a JSON array of ids.
///
/// # Safety
/// `set` must point to `set_len` readable ids; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_acl(
    graph: *const FlGraph,
    set: *const usize,
    set_len: usize,
    out_json: *mut *mut c_char,
) -> FlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let closure = acl(&borrow(graph, "graph")?.0, vertices(set, set_len, "set")?)?;
        *slot = to_c_string(serde_json::to_string(&closure)?);
        Ok(())
    })
}

/// Tests whether `b` and `c` are independent over `a`.
///
/// # Safety
/// Each set pointer must cover its length; `out_independent` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fl_is_independent(
    graph: *const FlGraph,
    b: *const usize,
    b_len: usize,
    a: *const usize,
    a_len: usize,
    c: *const usize,
    c_len: usize,
    out_independent: *mut bool,
) -> FlStatus {
    guard(|| {
        let slot = out(out_independent, "out_independent")?;
        let g = &borrow(graph, "graph")?.0;
        let r = is_independent(g, vertices(b, b_len, "b")?, vertices(a, a_len, "a")?, vertices(c, c_len, "c")?)?;
        *slot = r.independent;
        Ok(())
    })
}

/// Amalgamates `b` and `c` over the glue `glue_b[i] ~ glue_c[i]`.
///
/// With `free_only` the free amalgam is returned; otherwise the result is the
/// amalgam inside K, which requires the glued set to be strong on both sides.
///
/// # Safety
/// Both glue arrays must hold `glue_len` ids; `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_amalgamate(
    b: *const FlGraph,
    c: *const FlGraph,
    glue_b: *const usize,
    glue_c: *const usize,
    glue_len: usize,
    free_only: bool,
    out_graph: *mut *mut FlGraph,
) -> FlStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let (b, c) = (&borrow(b, "b")?.0, &borrow(c, "c")?.0);
        let glue = Glue::new(
            vertices(glue_b, glue_len, "glue_b")?.to_vec(),
            vertices(glue_c, glue_len, "glue_c")?.to_vec(),
        );
        let r = if free_only { free_amalgam(b, c, &glue)? } else { amalgamate_in_k(b, c, &glue)? };
        *slot = boxed(FlGraph(r.graph));
        Ok(())
    })
}

/// Enumerates cycle types with at most `max_vertices` vertices.
///
/// # Safety
/// `out_catalog` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_catalog_new(max_vertices: usize, out_catalog: *mut *mut FlCatalog) -> FlStatus {
    guard(|| {
        let slot = out(out_catalog, "out_catalog")?;
        *slot = boxed(FlCatalog(enumerate_cycle_types(max_vertices)?));
        Ok(())
    })
}

/// Releases a catalog. NULL is ignored.
///
/// # Safety
/// `catalog` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_catalog_free(catalog: *mut FlCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Number of cycle types, or 0 for NULL.
///
/// # Safety
/// `catalog` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_catalog_len(catalog: *const FlCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.0.types.len())
}

/// Serialises the catalog to JSON. Free the result with [`fl_string_free`].
///
/// # Safety
/// `catalog` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_catalog_to_json(catalog: *const FlCatalog, out_json: *mut *mut c_char) -> FlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = to_c_string(serde_json::to_string(&borrow(catalog, "catalog")?.0)?);
        Ok(())
    })
}

/// Evaluates `P_C(x, y)` for the cycle type named `type_name`.
///
/// # Safety
/// Handles must be live, `type_name` NUL-terminated, `out_holds` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_eval_p_c(
    graph: *const FlGraph,
    catalog: *const FlCatalog,
    type_name: *const c_char,
    x: usize,
    y: usize,
    out_holds: *mut bool,
) -> FlStatus {
    guard(|| {
        let slot = out(out_holds, "out_holds")?;
        let ty = borrow(catalog, "catalog")?.0.get(text(type_name, "type_name")?)?;
        *slot = eval_p_c(&borrow(graph, "graph")?.0, ty, x, y)?.is_some();
        Ok(())
    })
}

/// Evaluates `P_δ(x, y)` for a comma-separated sequence of cycle type names.
///
/// # Safety
/// Handles must be live, `delta` NUL-terminated, `out_holds` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_eval_p_delta(
    graph: *const FlGraph,
    catalog: *const FlCatalog,
    delta: *const c_char,
    x: usize,
    y: usize,
    out_holds: *mut bool,
) -> FlStatus {
    guard(|| {
        let slot = out(out_holds, "out_holds")?;
        let d = borrow(catalog, "catalog")?.0.delta(text(delta, "delta")?)?;
        *slot = eval_p_delta(&borrow(graph, "graph")?.0, &d, x, y)?.is_some();
        Ok(())
    })
}
