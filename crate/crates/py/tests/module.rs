use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn module_works_from_python() {
    Python::attach(|py| -> PyResult<()> {
        let module = pyo3::wrap_pymodule!(hurwitz::hurwitz)(py);
        let env = PyDict::new(py);
        env.set_item("hz", module)?;
        py.run(
            cr#"
from fractions import Fraction
assert hz.classical_hurwitz("2|2|2|2") == Fraction(1, 2)
assert hz.classical_hurwitz([[2, 1]] * 4) == 4
c = hz.tropical_hurwitz("2|2|2|2", hz.Tree("((0,1),(2,3));"))
assert (c.raw_count, c.weighted) == (1, Fraction(1, 2))
assert c.classes[0].betti == 1 and c.classes[0].aut == 2
m = hz.mumford_hurwitz("2|2|2|2", "(0,1,2,3);")
assert (m["wiener_weight"], m["mumford"]) == (Fraction(1, 2), 0)
t = hz.tropical_hurwitz("3|3|3")
assert (t.weighted, t.classical, t.higher_genus_weight) == (0, Fraction(1, 3), Fraction(1, 3))
try:
    hz.classical_hurwitz("2|3")
    raise AssertionError("accepted unequal sums")
except ValueError:
    pass
"#,
            None,
            Some(&env),
        )
    })
    .unwrap();
}
