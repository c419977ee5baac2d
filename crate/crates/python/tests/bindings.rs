use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(vlab_py::vlab_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("v", module).unwrap();
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn transform_round_trip() {
    run(r#"
b = v.Basis([2, 3], 4)
assert len(b) == 36 and b.radices == [2, 3, 2, 3]
f = v.random_function(b, 3)
c = v.vft_forward(b, f)
assert max(abs(x - y) for x, y in zip(c, v.vft_naive(b, f))) < 1e-12
assert max(abs(x - y) for x, y in zip(v.vft_inverse(b, c), f)) < 1e-12
"#);
}

#[test]
fn weights_and_means() {
    run(r#"
w = v.Weights("iterlog(1,1)")
assert w.monotonicity == "non_decreasing" and w.term(0) == 0.0
assert abs(w.domination_bound(3) - 3.0) < 1e-12
b = v.Basis([2], 5)
one = [1 + 0j] * len(b)
assert all(abs(x - 1) < 1e-12 for x in v.t_mean(b, one, w, 20))
try:
    v.t_mean(b, one, w, 2)
except ValueError as e:
    assert "2" in str(e)
else:
    raise AssertionError("Q_2 = 0 accepted")
"#);
}

#[test]
fn big_integers_cross_as_python_ints() {
    run(r#"
b = v.Basis([2], 60)
assert not b.is_dense
assert b.size == 2 ** 60
ce = v.Counterexample(count=3)
row = ce.chain(2, v.Weights("fejer"), samples=50, seed=9)
assert row["m_alpha"] == 2 ** 47 and row["tier"] == "analytic"
"#);
}

#[test]
fn run_reports_unknown_command() {
    run(r#"
try:
    v.run("nope")
except ValueError:
    pass
else:
    raise AssertionError
csv, bad = v.run("converge", "[basis]\nm = [2]\ndepth = 5\n[converge]\nj = 2\nn_max = 1000\npoints = 4\n")
assert not bad and csv.count("\n") == 13
"#);
}
