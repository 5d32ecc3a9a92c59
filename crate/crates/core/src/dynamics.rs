//! XXZ chain Hamiltonian with DM coupling, its energy basis, and the two
//! propagators: unitary evolution and Milburn intrinsic decoherence.
//!
//! The chain is periodic (site 4 is site 1) and ħ = 1 throughout, so times
//! are measured in inverse energy units.
//!
//! The energy eigenvectors do not depend on (J, Δ, D, B). [`basis_change_u`]
//! returns them as the columns of a fixed unitary whose k-th column carries
//! the energy `spectrum_closed_form(p)[k]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, kron, pauli_x, pauli_y, pauli_z, re, ComplexMatrix, C64};
use crate::states::{DensityMatrix, PureState};

/// Coupling constants of the chain Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianParams {
    /// Exchange coupling.
    pub j: f64,
    /// Anisotropy of the z-z exchange.
    pub delta: f64,
    /// DM interaction strength.
    pub d: f64,
    /// Uniform magnetic field along z.
    pub b: f64,
}

impl HamiltonianParams {
    pub fn new(j: f64, delta: f64, d: f64, b: f64) -> Result<Self> {
        for (name, v) in [("J", j), ("Delta", delta), ("D", d), ("B", b)] {
            if !v.is_finite() {
                return Err(Error::OutOfRange { name, value: v, domain: "finite" });
            }
        }
        Ok(Self { j, delta, d, b })
    }
}

impl Default for HamiltonianParams {
    fn default() -> Self {
        Self { j: 1.0, delta: 0.0, d: 0.0, b: 0.0 }
    }
}

/// Intrinsic decoherence rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilburnParams {
    pub gamma: f64,
}

impl MilburnParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::OutOfRange { name: "gamma", value: gamma, domain: "(0, inf)" })
        }
    }
}

fn site_op(m: &ComplexMatrix, site: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let mut ops = [&id, &id, &id];
    ops[site] = m;
    kron(&kron(ops[0], ops[1]), ops[2])
}

/// H = Σ_i J(σxσx + σyσy + Δσzσz) + D(σxσy − σyσx) + Bσz over the ring.
pub fn build_hamiltonian(p: HamiltonianParams) -> ComplexMatrix {
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    let sx: Vec<_> = (0..3).map(|i| site_op(&x, i)).collect();
    let sy: Vec<_> = (0..3).map(|i| site_op(&y, i)).collect();
    let sz: Vec<_> = (0..3).map(|i| site_op(&z, i)).collect();
    let mut h = ComplexMatrix::zeros(8, 8);
    for i in 0..3 {
        let k = (i + 1) % 3;
        let exchange = &(&(&sx[i] * &sx[k]) + &(&sy[i] * &sy[k])) + &(&sz[i] * &sz[k]).scale_real(p.delta);
        let dm = &(&sx[i] * &sy[k]) - &(&sy[i] * &sx[k]);
        h = &h + &exchange.scale_real(p.j);
        h = &h + &dm.scale_real(p.d);
        h = &h + &sz[i].scale_real(p.b);
    }
    h
}

/// Energies E1..E8 in their labelled order.
pub fn spectrum_closed_form(p: HamiltonianParams) -> [f64; 8] {
    let HamiltonianParams { j, delta, d, b } = p;
    let s = 2.0 * 3f64.sqrt() * d;
    let shift = j * (delta + 2.0);
    [
        -3.0 * (b - j * delta),
        -b - s - shift,
        b - s - shift,
        -b + s - shift,
        b + s - shift,
        -b - j * (delta - 4.0),
        b - j * (delta - 4.0),
        3.0 * (b + j * delta),
    ]
}

/// Fixed unitary whose columns are the energy eigenvectors, column k
/// belonging to the k-th entry of [`spectrum_closed_form`].
pub fn basis_change_u() -> ComplexMatrix {
    let s3 = 3f64.sqrt();
    let a = c(-s3 / 6.0, 0.5);
    let b = c(-s3 / 6.0, -0.5);
    let k = re(1.0 / s3);
    let o = re(0.0);
    let one = re(1.0);
    // Rows in binary index order |000⟩, |001⟩, |010⟩, |011⟩, |100⟩, |101⟩, |110⟩, |111⟩.
    let rows: [[C64; 8]; 8] = [
        [o, o, o, o, o, o, o, one],
        [o, o, a, o, b, o, k, o],
        [o, o, b, o, a, o, k, o],
        [o, a, o, b, o, k, o, o],
        [o, o, k, o, k, o, k, o],
        [o, b, o, a, o, k, o, o],
        [o, k, o, k, o, k, o, o],
        [one, o, o, o, o, o, o, o],
    ];
    ComplexMatrix::from_vec(8, 8, rows.iter().flatten().copied().collect())
}

/// Energy basis of one parameter set, checked against the Hamiltonian.
#[derive(Clone, Debug)]
pub struct EnergyBasis {
    params: HamiltonianParams,
    u: ComplexMatrix,
    energies: [f64; 8],
}

impl EnergyBasis {
    /// Builds the basis and verifies that U†HU is diagonal with the
    /// closed-form energies on the diagonal.
    pub fn new(params: HamiltonianParams) -> Result<Self> {
        let u = basis_change_u();
        let energies = spectrum_closed_form(params);
        let h = build_hamiltonian(params);
        let diag = u.adjoint().matmul(&h).matmul(&u);
        let expected = ComplexMatrix::real_diag(&energies);
        let defect = diag.max_abs_diff(&expected);
        let scale = h.max_abs().max(1.0);
        if defect > 1e-10 * scale {
            return Err(Error::BasisCheck { defect });
        }
        Ok(Self { params, u, energies })
    }

    pub fn params(&self) -> HamiltonianParams {
        self.params
    }

    pub fn energies(&self) -> &[f64; 8] {
        &self.energies
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn to_energy_basis(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.u.adjoint().matmul(rho).matmul(&self.u)
    }

    pub fn from_energy_basis(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.u.sandwich(rho)
    }

    /// e^{−iHt}
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let phases: Vec<C64> = self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        self.u.sandwich(&ComplexMatrix::diag(&phases))
    }

    pub fn evolve_pure(&self, psi: &PureState, t: f64) -> PureState {
        let v = self.propagator(t).apply(psi.amplitudes());
        let mut amps = [C64::default(); 8];
        amps.copy_from_slice(&v);
        PureState::normalized(amps).expect("unitary image of a unit vector")
    }

    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
        if t == 0.0 {
            return rho0.clone();
        }
        DensityMatrix::from_trusted(self.propagator(t).sandwich(rho0.matrix()))
    }

    pub fn evolve_milburn(&self, rho0: &DensityMatrix, m: MilburnParams, t: f64) -> DensityMatrix {
        if t == 0.0 {
            return rho0.clone();
        }
        let mut e = self.to_energy_basis(rho0.matrix());
        for n in 0..8 {
            for k in 0..8 {
                e[(n, k)] *= milburn_factor(self.energies[n], self.energies[k], m.gamma, t);
            }
        }
        DensityMatrix::from_trusted(self.from_energy_basis(&e))
    }
}

/// ρ(t) = e^{−iHt} ρ0 e^{iHt}
pub fn schrodinger_evolve(rho0: &DensityMatrix, p: HamiltonianParams, t: f64) -> Result<DensityMatrix> {
    finite_time(t)?;
    Ok(EnergyBasis::new(p)?.evolve(rho0, t))
}

/// |ψ(t)⟩ = e^{−iHt}|ψ0⟩
pub fn schrodinger_evolve_pure(psi: &PureState, p: HamiltonianParams, t: f64) -> Result<PureState> {
    finite_time(t)?;
    Ok(EnergyBasis::new(p)?.evolve_pure(psi, t))
}

/// Energy-basis element (n, n′) scaled by `milburn_factor(E_n, E_n′, γ, t)`.
pub fn milburn_evolve(rho0: &DensityMatrix, p: HamiltonianParams, m: MilburnParams, t: f64) -> Result<DensityMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::OutOfRange { name: "t", value: t, domain: "[0, inf)" });
    }
    Ok(EnergyBasis::new(p)?.evolve_milburn(rho0, m, t))
}

fn finite_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "t", value: t, domain: "finite" })
    }
}

/// exp[γ(e^{−i(E_n−E_m)/γ} − 1)t]
pub fn milburn_factor(en: f64, em: f64, gamma: f64, t: f64) -> C64 {
    let x = (en - em) / gamma;
    // e^{−ix} − 1 written without cancellation.
    let half = (0.5 * x).sin();
    let z = c(-2.0 * half * half, -x.sin());
    (z * (gamma * t)).exp()
}

/// exp[−iΔE t − ΔE² t/(2γ)]
pub fn milburn_factor_approx(en: f64, em: f64, gamma: f64, t: f64) -> C64 {
    let de = en - em;
    c(-de * de * t / (2.0 * gamma), -de * t).exp()
}
