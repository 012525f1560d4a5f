//! Independent reference implementation: the effective Hamiltonian is
//! exponentiated numerically and the pair density matrix evolved in the full
//! 4-dimensional space. Shares nothing with the library except the species
//! constants.

#![allow(dead_code)]

use meson_wigner::species::{MesonSpecies, Parameterization, SpeciesRegistry};
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub dm: f64,
    pub gl: f64,
    pub gh: f64,
    pub p: C,
    pub q: C,
}

pub fn params(species: &MesonSpecies, param: Parameterization) -> Params {
    let (p, q) = match param {
        Parameterization::Zeta => {
            let z = species.zeta().expect("zeta defined");
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (C::new(s, 0.0), C::from_polar(s, z))
        }
        Parameterization::Epsilon => {
            let e = species.epsilon().expect("epsilon defined");
            let n = (2.0 * (1.0 + e.norm_sqr())).sqrt();
            ((C::new(1.0, 0.0) + e) / n, (C::new(1.0, 0.0) - e) / n)
        }
    };
    Params {
        dm: species.delta_m(),
        gl: species.gamma_l(),
        gh: species.gamma_h(),
        p,
        q,
    }
}

pub fn builtin(name: &str, param: Parameterization) -> Params {
    params(SpeciesRegistry::builtin().get(name).unwrap(), param)
}

/// `H` with `H (p, q) = lambda_L (p, q)` and `H (p, -q) = lambda_H (p, -q)`.
pub fn hamiltonian(k: &Params) -> Matrix2<C> {
    let l_l = C::new(-0.5 * k.dm, -0.5 * k.gl);
    let l_h = C::new(0.5 * k.dm, -0.5 * k.gh);
    let h = (l_l + l_h) / 2.0;
    let d = (l_l - l_h) / 2.0;
    Matrix2::new(h, k.p / k.q * d, k.q / k.p * d, h)
}

pub fn propagator(k: &Params, dt: f64) -> Matrix2<C> {
    (hamiltonian(k) * C::new(0.0, -dt)).exp()
}

pub const LABELS: [&str; 6] = ["M", "Mbar", "M1", "M2", "M_L", "M_H"];

pub fn state(k: &Params, label: &str) -> Vector2<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    match label {
        "M" => Vector2::new(one, zero),
        "Mbar" => Vector2::new(zero, one),
        "M1" => Vector2::new(one * s, one * s),
        "M2" => Vector2::new(one * s, -one * s),
        "M_L" => Vector2::new(k.p, k.q),
        "M_H" => Vector2::new(k.p, -k.q),
        other => panic!("unknown state {other}"),
    }
}

fn kron2(a: &Vector2<C>, b: &Vector2<C>) -> Vector4<C> {
    Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

/// Ordering: index `2 i_II + i_I`.
pub fn initial_density(x: f64) -> Matrix4<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // (|M>_I |Mbar>_II - |Mbar>_I |M>_II) / sqrt 2
    let psi = Vector4::new(
        C::new(0.0, 0.0),
        C::new(-s, 0.0),
        C::new(s, 0.0),
        C::new(0.0, 0.0),
    );
    psi * psi.adjoint() * C::new(x, 0.0) + Matrix4::identity() * C::new((1.0 - x) / 4.0, 0.0)
}

pub fn pair_propagator(k: &Params, dt: f64) -> Matrix4<C> {
    let h = hamiltonian(k);
    let id = Matrix2::<C>::identity();
    let big = h.kronecker(&id) + id.kronecker(&h);
    (big * C::new(0.0, -dt)).exp()
}

pub fn joint(k: &Params, x: f64, out_ii: &str, out_i: &str, dt: f64) -> f64 {
    let u = pair_propagator(k, dt);
    let rho = u * initial_density(x) * u.adjoint();
    let v = kron2(&state(k, out_ii), &state(k, out_i));
    (v.adjoint() * rho * v)[(0, 0)].re
}

pub fn transition(k: &Params, from: &str, to: &str, dt: f64) -> f64 {
    let evolved = propagator(k, dt) * state(k, from);
    state(k, to).dotc(&evolved).norm_sqr()
}

/// `(a+, b+, c+, a-, b-, c-)` for `N = 1..=8`.
pub const TABLE: [[&str; 6]; 8] = [
    ["M1", "Mbar", "M_H", "M2", "M", "M_L"],
    ["M1", "M", "M_H", "M2", "Mbar", "M_L"],
    ["M2", "Mbar", "M_H", "M1", "M", "M_L"],
    ["M2", "M", "M_H", "M1", "Mbar", "M_L"],
    ["M1", "Mbar", "M_L", "M2", "M", "M_H"],
    ["M1", "M", "M_L", "M2", "Mbar", "M_H"],
    ["M2", "Mbar", "M_L", "M1", "M", "M_H"],
    ["M2", "M", "M_L", "M1", "Mbar", "M_H"],
];

/// `R_N(t, 0)` for a Werner state of purity `x`, unnormalized probabilities.
pub fn r_n(k: &Params, n: usize, t: f64, x: f64) -> f64 {
    let [ap, bp, cp, am, bm, _] = TABLE[n - 1];
    let lhs = joint(k, x, ap, bp, t);
    let taa = transition(k, ap, ap, t);
    let tma = transition(k, am, ap, t);
    let tbb = transition(k, bp, bp, t);
    let tmb = transition(k, bm, bp, t);
    let rhs = joint(k, x, ap, cp, 0.0) * taa * (tbb + tmb)
        + joint(k, x, am, cp, 0.0) * tma * (tbb + tmb)
        + joint(k, x, cp, bp, 0.0) * tbb * (taa + tma)
        + joint(k, x, cp, bm, 0.0) * tmb * (taa + tma);
    rhs / lhs
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
