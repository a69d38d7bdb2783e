use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "e7sym").unwrap();
        e7sym_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("e7sym", m).unwrap();
        py.run(code, Some(&globals), None).unwrap();
    });
}

#[test]
fn invariants_and_dims() {
    with_module(c_str!(
        r#"
x = '[[1],[2],[0],[2],[3],["1/2"],[0],["1/2"],[4]]'
assert e7sym.det(x) == "-17/4"
assert e7sym.trace(x) == "8/1"
assert e7sym.e7_dim("R") == 21
assert len(e7sym.mul_table(2)) == 4
"#
    ));
}

#[test]
fn freudvec_cube_round_trip() {
    with_module(c_str!(
        r#"
p = e7sym.FreudVec.random("H", 3)
c = p.cube()
assert c.is_antisymmetric()
assert c.to_freudvec() == p
assert e7sym.FreudVec.from_json(p.to_json()) == p
t = e7sym.Theta.basis("H", 65)
assert c.act(t, "sided") == c.act(t, "naive")
"#
    ));
}

#[test]
fn errors_become_value_errors() {
    with_module(c_str!(
        r#"
for bad in (lambda: e7sym.mul_table(5), lambda: e7sym.Theta.basis("C", 99), lambda: e7sym.det("[[1]]")):
    try:
        bad()
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
"#
    ));
}
