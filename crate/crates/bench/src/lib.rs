//! Shared fixtures for benchmarks.

use rotvec_core::{
    make_pinned_profile, wrap, ClosedOneForm, CohomologyClass, HamiltonianSpec, PhasePoint,
    PhaseSpace, TrigSeries, TrigTerm, VectorFieldSpec,
};

pub fn sin_squared_field() -> (VectorFieldSpec, PhasePoint) {
    let space = PhaseSpace::standard_torus(1);
    let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::sin_squared(2, 0), &space).unwrap();
    let x0 = wrap(&[0.2, 0.0], &space).unwrap();
    (field, x0)
}

pub fn twisted_field() -> (VectorFieldSpec, PhasePoint) {
    let space = PhaseSpace::twisted_torus(2f64.sqrt() - 1.0).unwrap();
    let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::sin_squared(4, 0), &space).unwrap();
    let x0 = wrap(&[0.2, 0.0, 0.0, 0.0], &space).unwrap();
    (field, x0)
}

/// A field that depends on all coordinates, so the implicit solve does real work.
pub fn coupled_field() -> (VectorFieldSpec, PhasePoint) {
    let space = PhaseSpace::standard_torus(1);
    let f = HamiltonianSpec::Fourier(
        TrigSeries::new(
            2,
            0.0,
            vec![
                TrigTerm::new(vec![1, 0], 0, 0.5, 0.0),
                TrigTerm::new(vec![0, 1], 0, 0.3, 0.1),
                TrigTerm::new(vec![1, 1], 0, 0.1, 0.2),
            ],
        )
        .unwrap(),
    );
    let field = VectorFieldSpec::hamiltonian(f, &space).unwrap();
    let x0 = wrap(&[0.1, 0.3], &space).unwrap();
    (field, x0)
}

pub fn profile_hamiltonian(n_modes: usize) -> HamiltonianSpec {
    let u = make_pinned_profile(&[(0.0, 0.0), (0.5, 1.0)], None, n_modes).unwrap();
    HamiltonianSpec::profile(2, 0, u).unwrap()
}

pub fn half_dq1() -> ClosedOneForm {
    ClosedOneForm::constant(CohomologyClass::dq(1, 0, 0.5))
}
