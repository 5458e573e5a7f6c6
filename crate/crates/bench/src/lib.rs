//! Benchmark instances shared by the benches in `benches/`.

use cwcolor::{build_family, instantiate_builtin, Builtin, CwExpression, Family, ProblemModel};

/// A family expression together with a model on the graph it builds.
pub fn family_instance(family: Family, n: usize, spec: &Builtin) -> (ProblemModel, CwExpression) {
    let e = build_family(family, n, None).expect("family size is valid");
    let (g, _) = e.realize();
    let m = instantiate_builtin(spec, &g).expect("model instantiates");
    (m, e)
}
