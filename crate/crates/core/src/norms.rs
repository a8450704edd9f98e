//! Weighted `C^k_β` and `L^p_{k,β}` norms of fields sampled on cone annuli
//! `Σ × [r0, r1]` with metric `dr² + r² g_Σ`.
//!
//! Sup norms are grid maxima and therefore lower bounds for the continuous
//! supremum. Radial integrals use composite Simpson in `t = log r`.

use rayon::prelude::*;
use serde::Serialize;

use crate::mesh::TriMesh;
use crate::radial::fd_weights;
use crate::spectrum::{FemLaplacian, SpectrumTable};
use crate::{Error, Result};

/// `vol(S^{n-1})` for the unit sphere in `R^n`.
pub fn sphere_volume(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_volume(n - 2),
    }
}

/// Product grid of link samples and log-spaced shells, stored radial-major.
#[derive(Debug, Clone, Serialize)]
pub struct ConeAnnulus {
    m: usize,
    link_weights: Vec<f64>,
    radii: Vec<f64>,
    /// Simpson weight in `t` times `r`, so that `Σ w_k F(r_k) ≈ ∫ F dr`.
    radial_weights: Vec<f64>,
}

impl ConeAnnulus {
    /// `shells` must be odd and at least 3.
    pub fn new(m: usize, link_weights: Vec<f64>, r0: f64, r1: f64, shells: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(format!("cone dimension m = {m} must be at least 2")));
        }
        if link_weights.is_empty() || link_weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput("link weights must be positive".into()));
        }
        if !(r0 > 0.0 && r0 < r1 && r1.is_finite()) {
            return Err(Error::InvalidInput(format!("radii ({r0}, {r1}) must satisfy 0 < r0 < r1")));
        }
        if shells < 3 || shells.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("Simpson quadrature needs an odd shell count >= 3, got {shells}")));
        }
        let (t0, t1) = (r0.ln(), r1.ln());
        let h = (t1 - t0) / (shells - 1) as f64;
        let radii: Vec<f64> = (0..shells).map(|k| if k == shells - 1 { r1 } else { (t0 + k as f64 * h).exp() }).collect();
        let radial_weights = radii
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let s = if k == 0 || k == shells - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                s * h / 3.0 * r
            })
            .collect();
        Ok(ConeAnnulus { m, link_weights, radii, radial_weights })
    }

    /// Cone over a triangulated surface, weighted by the lumped link mass.
    pub fn over_mesh(fem: &FemLaplacian, r0: f64, r1: f64, shells: usize) -> Result<Self> {
        Self::new(3, fem.mass.clone(), r0, r1, shells)
    }

    /// Cone over the round `S^{m-1}` for fields constant on the link: a
    /// single link sample carrying the sphere's volume.
    pub fn round_sphere(m: usize, r0: f64, r1: f64, shells: usize) -> Result<Self> {
        Self::new(m, vec![sphere_volume(m)], r0, r1, shells)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn link_len(&self) -> usize {
        self.link_weights.len()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.link_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Radius of the sample at flat index `idx`.
    pub fn radius_at(&self, idx: usize) -> f64 {
        self.radii[idx / self.link_len()]
    }

    /// Volume element `w_link r^{m-1} w_radial` of each sample.
    pub fn volume_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for (r, wr) in self.radii.iter().zip(&self.radial_weights) {
            let shell = r.powi(self.m as i32 - 1) * wr;
            out.extend(self.link_weights.iter().map(|w| w * shell));
        }
        out
    }

    /// Samples a function of `(link index, r)`.
    pub fn sample(&self, f: impl Fn(usize, f64) -> f64 + Sync) -> Vec<f64> {
        let n = self.link_len();
        (0..self.len()).into_par_iter().map(|idx| f(idx % n, self.radii[idx / n])).collect()
    }
}

/// Radius function of a single conical point, capped at 1.
pub fn radius_function(r: f64) -> f64 {
    r.min(1.0)
}

/// Values on a [`ConeAnnulus`] with optional pointwise norms `|∇f|`, `|∇²f|`.
#[derive(Debug, Clone, Serialize)]
pub struct SampledField {
    pub values: Vec<f64>,
    pub grad_norm: Option<Vec<f64>>,
    pub hess_norm: Option<Vec<f64>>,
}

impl SampledField {
    pub fn new(values: Vec<f64>) -> Self {
        SampledField { values, grad_norm: None, hess_norm: None }
    }

    /// A radial field `f(r)` with exact derivative norms from `f'` and `f''`:
    /// `|∇f| = |f'|`, `|∇²f|² = f''² + (m-1)(f'/r)²`.
    pub fn radial(
        annulus: &ConeAnnulus,
        f: impl Fn(f64) -> f64 + Sync,
        df: impl Fn(f64) -> f64 + Sync,
        d2f: impl Fn(f64) -> f64 + Sync,
    ) -> Self {
        let m = annulus.m() as f64;
        SampledField {
            values: annulus.sample(|_, r| f(r)),
            grad_norm: Some(annulus.sample(|_, r| df(r).abs())),
            hess_norm: Some(annulus.sample(|_, r| (d2f(r).powi(2) + (m - 1.0) * (df(r) / r).powi(2)).sqrt())),
        }
    }

    /// Attaches `|∇f|² = (∂_r f)² + r^{-2} |∇_Σ f|²`, with the radial
    /// derivative by 4th-order differences in `log r` and the tangential one
    /// from area-averaged piecewise-linear gradients on the link mesh.
    pub fn with_mesh_gradient(mut self, annulus: &ConeAnnulus, mesh: &TriMesh) -> Result<Self> {
        self.check(annulus)?;
        let n = annulus.link_len();
        if mesh.num_vertices() != n {
            return Err(Error::InvalidInput("mesh does not match the annulus link".into()));
        }
        let shells = annulus.radii.len();
        if shells < 5 {
            return Err(Error::InvalidInput("radial differences need at least 5 shells".into()));
        }
        let ts: Vec<f64> = annulus.radii.iter().map(|r| r.ln()).collect();
        let stencils: Vec<(usize, Vec<f64>)> = (0..shells)
            .map(|k| {
                let start = k.saturating_sub(2).min(shells - 5);
                (start, fd_weights(ts[k], &ts[start..start + 5], 1)[1].clone())
            })
            .collect();
        let mut grad = vec![0.0; annulus.len()];
        for k in 0..shells {
            let r = annulus.radii[k];
            let shell = &self.values[k * n..(k + 1) * n];
            let tangential = vertex_gradients(mesh, shell);
            let (start, w) = &stencils[k];
            for i in 0..n {
                let dt: f64 = w.iter().enumerate().map(|(j, c)| c * self.values[(start + j) * n + i]).sum();
                let dr = dt / r;
                grad[k * n + i] = (dr * dr + tangential[i] / (r * r)).sqrt();
            }
        }
        self.grad_norm = Some(grad);
        Ok(self)
    }

    fn check(&self, annulus: &ConeAnnulus) -> Result<()> {
        let len = annulus.len();
        let ok = self.values.len() == len
            && self.grad_norm.as_ref().is_none_or(|g| g.len() == len)
            && self.hess_norm.as_ref().is_none_or(|g| g.len() == len);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("field shape does not match the annulus ({len} samples)")))
        }
    }

    fn stack(&self, j: usize) -> Result<Vec<f64>> {
        match j {
            0 => Ok(self.values.iter().map(|v| v.abs()).collect()),
            1 => self.grad_norm.clone().ok_or_else(|| Error::InvalidInput("field has no gradient stack".into())),
            2 => self.hess_norm.clone().ok_or_else(|| Error::InvalidInput("field has no Hessian stack".into())),
            _ => Err(Error::InvalidInput(format!("derivative order {j} exceeds 2"))),
        }
    }
}

/// Squared norms of per-vertex gradients: area-weighted averages of the
/// constant gradient of the linear interpolant on each triangle.
fn vertex_gradients(mesh: &TriMesh, f: &[f64]) -> Vec<f64> {
    let dim = mesh.dim();
    let n = mesh.num_vertices();
    let mut acc = vec![0.0; n * dim];
    let mut area = vec![0.0; n];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let e1 = mesh.edge_vector(tri[0], tri[1]);
        let e2 = mesh.edge_vector(tri[0], tri[2]);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (g11, g12, g22) = (dot(&e1, &e1), dot(&e1, &e2), dot(&e2, &e2));
        let det = g11 * g22 - g12 * g12;
        let (d1, d2) = (f[tri[1]] - f[tri[0]], f[tri[2]] - f[tri[0]]);
        // coefficients of the gradient in the (e1, e2) frame: G^{-1} d
        let a = (g22 * d1 - g12 * d2) / det;
        let b = (g11 * d2 - g12 * d1) / det;
        let w = mesh.triangle_area(t);
        for &v in tri {
            for c in 0..dim {
                acc[v * dim + c] += w * (a * e1[c] + b * e2[c]);
            }
            area[v] += w;
        }
    }
    (0..n)
        .map(|v| acc[v * dim..(v + 1) * dim].iter().map(|x| (x / area[v]).powi(2)).sum())
        .collect()
}

fn check_order(k: usize) -> Result<()> {
    if k > 2 {
        return Err(Error::InvalidInput(format!("derivative order k = {k} must be at most 2")));
    }
    Ok(())
}

/// `Σ_{j<=k} max |ρ^{-β+j} ∇^j f|` over the grid.
pub fn weighted_ck_norm(annulus: &ConeAnnulus, f: &SampledField, beta: f64, k: usize) -> Result<f64> {
    check_order(k)?;
    f.check(annulus)?;
    let mut total = 0.0;
    for j in 0..=k {
        let s = f.stack(j)?;
        total += s
            .par_iter()
            .enumerate()
            .map(|(idx, v)| radius_function(annulus.radius_at(idx)).powf(-beta + j as f64) * v)
            .reduce(|| 0.0, f64::max);
    }
    Ok(total)
}

/// `(Σ_{j<=k} ∫ |ρ^{-β+j} ∇^j f|^p ρ^{-m} dV)^{1/p}`; `p = ∞` gives the
/// weighted sup norm.
pub fn weighted_lp_norm(annulus: &ConeAnnulus, f: &SampledField, p: f64, beta: f64, k: usize) -> Result<f64> {
    check_order(k)?;
    f.check(annulus)?;
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("exponent p = {p} must be at least 1")));
    }
    if p.is_infinite() {
        return weighted_ck_norm(annulus, f, beta, k);
    }
    let dv = annulus.volume_weights();
    let m = annulus.m() as f64;
    let mut sum = 0.0;
    for j in 0..=k {
        let s = f.stack(j)?;
        sum += s
            .par_iter()
            .zip(&dv)
            .enumerate()
            .map(|(idx, (v, w))| {
                let rho = radius_function(annulus.radius_at(idx));
                (rho.powf(-beta + j as f64) * v).powf(p) * rho.powf(-m) * w
            })
            .sum::<f64>();
    }
    Ok(sum.powf(1.0 / p))
}

/// Unweighted `(∫ f² dV)^{1/2}`.
pub fn l2_norm(annulus: &ConeAnnulus, f: &SampledField) -> Result<f64> {
    f.check(annulus)?;
    Ok(f.values.iter().zip(annulus.volume_weights()).map(|(v, w)| v * v * w).sum::<f64>().sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingReport {
    pub pairing: f64,
    /// `‖u‖_{L^p_{0,β}} ‖v‖_{L^q_{0,-β-m}}`.
    pub bound: f64,
    pub holds: bool,
}

/// `⟨u, v⟩ = ∫ uv dV` with its Hölder bound for conjugate `(p, q)`.
pub fn dual_pairing(
    annulus: &ConeAnnulus,
    u: &SampledField,
    v: &SampledField,
    p: f64,
    q: f64,
    beta: f64,
) -> Result<PairingReport> {
    if !(p >= 1.0 && q >= 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::Exponent { p, q });
    }
    u.check(annulus)?;
    v.check(annulus)?;
    let pairing: f64 = u
        .values
        .iter()
        .zip(&v.values)
        .zip(annulus.volume_weights())
        .map(|((a, b), w)| a * b * w)
        .sum();
    let nu = weighted_lp_norm(annulus, &SampledField::new(u.values.clone()), p, beta, 0)?;
    let nv = weighted_lp_norm(annulus, &SampledField::new(v.values.clone()), q, -beta - annulus.m() as f64, 0)?;
    let bound = nu * nv;
    Ok(PairingReport { pairing, bound, holds: pairing.abs() <= bound * (1.0 + 1e-12) })
}

/// Constant `C = λ₁^{-1/2}` in `‖u‖₂ <= C ‖du‖₂` for mean-zero functions on
/// a connected link.
pub fn poincare_constant(spectrum: &SpectrumTable) -> Result<f64> {
    let components = spectrum.zero_multiplicity();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let lam1 = spectrum
        .first_nonzero()
        .ok_or_else(|| Error::InsufficientData("spectrum has no nonzero eigenvalue".into()))?;
    Ok(lam1.powf(-0.5))
}

/// Removes the mass-weighted mean.
pub fn project_mean_zero(fem: &FemLaplacian, u: &[f64]) -> Vec<f64> {
    let total: f64 = fem.mass.iter().sum();
    let mean = u.iter().zip(&fem.mass).map(|(a, m)| a * m).sum::<f64>() / total;
    u.iter().map(|a| a - mean).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareCheck {
    /// `uᵀ M u`.
    pub mass: f64,
    /// `C² uᵀ K u`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares `uᵀMu` with `C² uᵀKu` for a mean-zero `u`.
pub fn poincare_check(fem: &FemLaplacian, constant: f64, u: &[f64], rel_tol: f64) -> PoincareCheck {
    let mass = fem.mass_inner(u, u);
    let bound = constant * constant * fem.energy_inner(u, u);
    PoincareCheck { mass, bound, holds: mass <= bound * (1.0 + rel_tol) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeBasis;
    use crate::spectrum::{fem_modes, flat_torus_spectrum, sphere_spectrum};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn s2(a: f64) -> ConeAnnulus {
        ConeAnnulus::round_sphere(3, a, 1.0, 201).unwrap()
    }

    fn power(ann: &ConeAnnulus, beta: f64) -> SampledField {
        SampledField::radial(
            ann,
            |r| r.powf(beta),
            |r| beta * r.powf(beta - 1.0),
            |r| beta * (beta - 1.0) * r.powf(beta - 2.0),
        )
    }

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn radius_function_examples() {
        assert_eq!(radius_function(0.3), 0.3);
        assert_eq!(radius_function(1.0), 1.0);
        assert_eq!(radius_function(2.0), 1.0);
    }

    #[test]
    fn ck_examples() {
        let a = 1e-2;
        let ann = s2(a);
        let f = power(&ann, 1.7);
        assert!((weighted_ck_norm(&ann, &f, 1.7, 0).unwrap() - 1.0).abs() < 1e-12);
        let one = SampledField::new(vec![1.0; ann.len()]);
        assert_eq!(weighted_ck_norm(&ann, &one, 0.0, 0).unwrap(), 1.0);
        let rho = power(&ann, 1.0);
        let got = weighted_ck_norm(&ann, &rho, 2.0, 0).unwrap();
        assert!((got - 1.0 / a).abs() < 1e-9 / a);
        // r^β has |∇ r^β| ρ^{1-β} = |β| exactly
        let g = weighted_ck_norm(&ann, &f, 1.7, 1).unwrap();
        assert!((g - 2.7).abs() < 1e-12);
        assert!(matches!(weighted_ck_norm(&ann, &one, 0.0, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn lp_examples() {
        let a = 1e-3;
        let ann = s2(a);
        let exact = 4.0 * PI * (1.0 / a).ln();
        let f = power(&ann, -0.4);
        let got = weighted_lp_norm(&ann, &f, 2.0, -0.4, 0).unwrap();
        assert!((got - exact.sqrt()).abs() < 1e-12 * exact);
        let zero = SampledField::new(vec![0.0; ann.len()]);
        assert_eq!(weighted_lp_norm(&ann, &zero, 3.0, 0.5, 0).unwrap(), 0.0);
        let one = SampledField::new(vec![1.0; ann.len()]);
        let got = weighted_lp_norm(&ann, &one, 1.0, 0.0, 0).unwrap();
        assert!((got - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn unweighted_l2_at_half_dimension_weight() {
        let ann = ConeAnnulus::round_sphere(4, 0.05, 0.9, 51).unwrap();
        let f = SampledField::new(ann.sample(|_, r| (3.0 * r).sin() + r * r));
        let a = weighted_lp_norm(&ann, &f, 2.0, -2.0, 0).unwrap();
        let b = l2_norm(&ann, &f).unwrap();
        assert!((a - b).abs() < 1e-13 * b);
    }

    #[test]
    fn holder_equality_case() {
        let a = 1e-3;
        let ann = s2(a);
        let beta = 0.7;
        let u = SampledField::new(ann.sample(|_, r| r.powf(beta)));
        let v = SampledField::new(ann.sample(|_, r| r.powf(-beta - 3.0)));
        let rep = dual_pairing(&ann, &u, &v, 2.0, 2.0, beta).unwrap();
        let exact = 4.0 * PI * (1.0 / a).ln();
        assert!((rep.pairing - exact).abs() < 1e-12 * exact);
        assert!((rep.pairing - rep.bound).abs() < 1e-10 * rep.bound);
        assert!(rep.holds);
        let zero = SampledField::new(vec![0.0; ann.len()]);
        assert_eq!(dual_pairing(&ann, &zero, &v, 3.0, 1.5, beta).unwrap().pairing, 0.0);
        assert!(matches!(dual_pairing(&ann, &u, &v, 2.0, 3.0, beta), Err(Error::Exponent { .. })));
        assert!(dual_pairing(&ann, &u, &v, 1.0, f64::INFINITY, beta).unwrap().holds);
    }

    #[test]
    fn mesh_gradient_of_a_linear_function() {
        // x₁ = r σ₁ on the cone over S² has |∇x₁| = 1
        let mesh = TriMesh::icosphere(4);
        let fem = FemLaplacian::assemble(&mesh).unwrap();
        let ann = ConeAnnulus::over_mesh(&fem, 0.5, 1.0, 21).unwrap();
        let f = SampledField::new(ann.sample(|i, r| r * mesh.vertex(i)[0])).with_mesh_gradient(&ann, &mesh).unwrap();
        let g = f.grad_norm.unwrap();
        let worst = g.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 2e-2, "{worst}");
    }

    #[test]
    fn poincare_examples() {
        assert!((poincare_constant(&sphere_spectrum(3, 2).unwrap()).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let t = flat_torus_spectrum(&LatticeBasis::cubic(2, 1.0).unwrap(), 50.0).unwrap();
        assert!((poincare_constant(&t).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!(matches!(poincare_constant(&t.merge(&t).unwrap()), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn discrete_poincare_on_icosphere() {
        let mesh = TriMesh::icosphere(3);
        let (fem, modes) = fem_modes(&mesh, 4, 1e-12).unwrap();
        let c = modes.values[1].powf(-0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let u: Vec<f64> = (0..mesh.num_vertices()).map(|_| rng.random_range(-1.0..1.0)).collect();
            assert!(poincare_check(&fem, c, &project_mean_zero(&fem, &u), 1e-12).holds);
        }
        let eq = poincare_check(&fem, c, &modes.vectors[1], 0.0);
        assert!((eq.mass - eq.bound).abs() < 1e-8 * eq.mass);
    }

    proptest! {
        #[test]
        fn norms_are_homogeneous_and_subadditive(seed in 0u64..1000, c in -5.0f64..5.0, beta in -2.0f64..2.0, p in 1.0f64..4.0) {
            let ann = ConeAnnulus::round_sphere(3, 0.01, 1.0, 21).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = SampledField::new((0..ann.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let g = SampledField::new((0..ann.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let cf = SampledField::new(f.values.iter().map(|v| c * v).collect());
            let sum = SampledField::new(f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect());
            for norm in [
                |a: &ConeAnnulus, x: &SampledField, p: f64, b: f64| weighted_lp_norm(a, x, p, b, 0).unwrap(),
                |a: &ConeAnnulus, x: &SampledField, _p: f64, b: f64| weighted_ck_norm(a, x, b, 0).unwrap(),
            ] {
                let (nf, ng) = (norm(&ann, &f, p, beta), norm(&ann, &g, p, beta));
                prop_assert!((norm(&ann, &cf, p, beta) - c.abs() * nf).abs() <= 1e-12 * (1.0 + nf * c.abs()));
                prop_assert!(norm(&ann, &sum, p, beta) <= (nf + ng) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn sup_norm_is_monotone_in_weight(seed in 0u64..1000, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0) {
            let ann = ConeAnnulus::round_sphere(3, 0.01, 1.0, 21).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = SampledField::new((0..ann.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let (gamma, beta) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
            prop_assert!(weighted_ck_norm(&ann, &f, gamma, 0).unwrap() <= weighted_ck_norm(&ann, &f, beta, 0).unwrap());
        }

        #[test]
        fn holder_inequality_random(seed in 0u64..1000, p in 1.05f64..6.0, beta in -2.0f64..2.0) {
            let ann = ConeAnnulus::round_sphere(3, 1e-3, 1.0, 31).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = SampledField::new((0..ann.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let v = SampledField::new((0..ann.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let q = p / (p - 1.0);
            prop_assert!(dual_pairing(&ann, &u, &v, p, q, beta).unwrap().holds);
        }
    }
}
