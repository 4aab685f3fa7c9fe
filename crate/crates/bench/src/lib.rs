//! Workloads shared by the criterion benches.

use kstab_core::rational::{frac, int};
use kstab_core::toric::{moment_polytope, Polytope};
use kstab_core::{
    FanPair, LatticeVector, PiecewisePolynomial, Polynomial, WeightedBlowupDescriptor,
};

pub fn p2_polytope() -> Polytope {
    moment_polytope(&FanPair::projective_plane()).expect("P2 is log Fano")
}

pub fn p3_polytope() -> Polytope {
    moment_polytope(&FanPair::projective_space3()).expect("P3 is log Fano")
}

pub fn slanted_vector() -> LatticeVector {
    LatticeVector::new(vec![5, 3])
}

/// An interior admissible `τ` for weights `(3, 2)`.
pub fn wb_case() -> WeightedBlowupDescriptor {
    WeightedBlowupDescriptor::new(3, 2, Some(frac(17, 2))).expect("admissible")
}

/// Cubic pieces on `[0, 1, 2, ..., pieces]`, continuous at every break.
pub fn cubic_chain(pieces: i64) -> PiecewisePolynomial {
    let mut polys = Vec::new();
    let mut value = int(1000);
    for i in 0..pieces {
        let shape = Polynomial::new(vec![int(0), int(-1), frac(1, i + 2), frac(-1, 7)]);
        let shifted = &shape - &Polynomial::constant(shape.eval(&int(i)));
        polys.push(&shifted + &Polynomial::constant(value.clone()));
        value += shifted.eval(&int(i + 1));
    }
    PiecewisePolynomial::new((0..=pieces).map(int).collect(), polys).expect("continuous")
}
