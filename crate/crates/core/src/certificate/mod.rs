//! Numerical dual certificate for the SDP relaxation.
//!
//! With `β = -d` and `γ = 0` the dual matrix is `Y = A + dI + B`, where `B` is
//! non-negative and supported on edges between `S` and `V \ S`. Each column
//! `j ∉ S` of `B` is found from a bounded LP that makes every padded
//! threshold eigenvector of the planted block an eigenvector of `Y`.

mod lemmas;
mod lp;

pub use lemmas::{empirical_lemma_checks, LemmaReport, LemmaTrials};
pub use lp::{feasibility_tolerance, solve_bounded_lp, solve_min_cap_lp, FarkasCertificate, LpOutcome};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{spectral_norm, symmetric_eig, SymmetricSpectrum};
use crate::instance::{ModelParams, PlantedInstance};

/// Eigenvectors of `A|_{S x S}` with eigenvalue at most `-τ`.
#[derive(Debug, Clone)]
pub struct ThresholdBasis {
    pub tau: f64,
    pub n: usize,
    /// `S`, ascending; row `a` of `vectors` belongs to `vertices[a]`.
    pub vertices: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    /// `k x L`, orthonormal columns.
    pub vectors: DMatrix<f64>,
}

impl ThresholdBasis {
    /// Basis from a planted block given in the vertex order `vertices`.
    pub fn from_block(block: &DMatrix<f64>, vertices: Vec<usize>, n: usize, tau: f64) -> Result<Self> {
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::InvalidParams(format!("tau = {tau} must be positive")));
        }
        let spectrum = symmetric_eig(block)?;
        Ok(Self::from_spectrum(&spectrum, vertices, n, tau))
    }

    fn from_spectrum(s: &SymmetricSpectrum, vertices: Vec<usize>, n: usize, tau: f64) -> Self {
        let k = vertices.len();
        let scale = s.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        let picked: Vec<usize> = (0..s.len()).filter(|&i| s.eigenvalues[i] <= -tau + 1e-9 * scale).collect();
        let mut vectors = s.eigenvectors.select_columns(picked.iter());
        // the all-ones direction is never a bottom eigenvector, but degenerate
        // eigenspaces can leak rounding noise into it
        if k > 0 {
            for mut col in vectors.column_iter_mut() {
                let mean = col.sum() / k as f64;
                col.add_scalar_mut(-mean);
            }
            for c in 0..vectors.ncols() {
                for prev in 0..c {
                    let proj = vectors.column(prev).dot(&vectors.column(c));
                    let p = vectors.column(prev).into_owned();
                    vectors.column_mut(c).axpy(-proj, &p, 1.0);
                }
                let norm = vectors.column(c).norm();
                vectors.column_mut(c).unscale_mut(norm);
            }
        }
        ThresholdBasis {
            tau,
            n,
            vertices,
            eigenvalues: picked.iter().map(|&i| s.eigenvalues[i]).collect(),
            vectors,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `n x L` with zeros outside `S`.
    pub fn padded(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.len());
        for (a, &v) in self.vertices.iter().enumerate() {
            out.row_mut(v).copy_from(&self.vectors.row(a));
        }
        out
    }

    /// `max_l ‖v⁽ˡ⁾‖_∞`.
    pub fn max_abs_entry(&self) -> f64 {
        self.vectors.amax()
    }
}

pub fn threshold_basis(inst: &PlantedInstance, tau: f64) -> Result<ThresholdBasis> {
    ThresholdBasis::from_block(&inst.planted_block(), inst.planted_set(), inst.n(), tau)
}

/// Per-vertex rows of the threshold basis: `w⁽ⁱ⁾ = W e_i` for `i ∈ S`.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub vertices: Vec<usize>,
    /// `L x k`; column `a` is `w` of `vertices[a]`.
    pub w: DMatrix<f64>,
    position: Vec<Option<usize>>,
}

impl SpectralEmbedding {
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn of(&self, vertex: usize) -> Option<DVector<f64>> {
        self.position
            .get(vertex)
            .copied()
            .flatten()
            .map(|a| self.w.column(a).into_owned())
    }

    pub fn position(&self, vertex: usize) -> Option<usize> {
        self.position.get(vertex).copied().flatten()
    }

    /// `Σ_{i∈S} w⁽ⁱ⁾`.
    pub fn sum(&self) -> DVector<f64> {
        self.w.column_sum()
    }

    /// `Σ_{i∈S} w⁽ⁱ⁾ w⁽ⁱ⁾ᵀ`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.w * self.w.transpose()
    }

    /// `Σ_{i ∈ T} w⁽ⁱ⁾ w⁽ⁱ⁾ᵀ` over the embedded vertices of `subset`.
    pub fn partial_gram(&self, subset: &[usize]) -> DMatrix<f64> {
        let l = self.dim();
        let mut m = DMatrix::zeros(l, l);
        for &v in subset {
            if let Some(a) = self.position(v) {
                let col = self.w.column(a);
                m.ger(1.0, &col, &col, 1.0);
            }
        }
        m
    }
}

pub fn spectral_embedding(basis: &ThresholdBasis) -> SpectralEmbedding {
    let mut position = vec![None; basis.n];
    for (a, &v) in basis.vertices.iter().enumerate() {
        position[v] = Some(a);
    }
    SpectralEmbedding {
        vertices: basis.vertices.clone(),
        w: basis.vectors.transpose(),
        position,
    }
}

/// `b = -Σ_{i ∈ N(j) ∩ S} w⁽ⁱ⁾`.
pub fn lp_rhs(j: usize, emb: &SpectralEmbedding, inst: &PlantedInstance) -> DVector<f64> {
    let mut b = DVector::zeros(emb.dim());
    for &i in inst.graph.neighbors(j) {
        if let Some(a) = emb.position(i) {
            b -= emb.w.column(a);
        }
    }
    b
}

/// Default entry cap `t = (56 L / p^{3/2}) sqrt(ln k / (γ k))`.
pub fn default_t(params: &ModelParams, l: usize) -> f64 {
    let k = params.k as f64;
    56.0 * l as f64 / params.p.powf(1.5) * (k.ln() / (params.gamma() * k)).sqrt()
}

/// Operator-norm bound `896 sqrt(n ln k) / p^{5/2}`.
pub fn b_norm_bound(params: &ModelParams) -> f64 {
    896.0 * (params.n as f64 * (params.k as f64).ln()).sqrt() / params.p.powf(2.5)
}

/// Bound `2 t sqrt(k (n - k))` for entries capped by `t`.
pub fn entrywise_norm_bound(params: &ModelParams, t: f64) -> f64 {
    2.0 * t * ((params.k * (params.n - params.k)) as f64).sqrt()
}

/// Which feasible point each column LP returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnStrategy {
    /// First vertex found by phase one.
    Vertex,
    /// Smallest largest entry, spreading the mass over the neighbourhood.
    #[default]
    MinMaxEntry,
}

impl std::str::FromStr for ColumnStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(ColumnStrategy::Vertex),
            "min_max_entry" | "minmax" => Ok(ColumnStrategy::MinMaxEntry),
            other => Err(Error::Parse(format!("unknown column strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnFailure {
    pub column: usize,
    pub certificate: FarkasCertificate,
}

#[derive(Debug, Clone)]
pub enum BMatrixOutcome {
    Built(DMatrix<f64>),
    Infeasible(Vec<ColumnFailure>),
}

/// Solve one bounded LP per outside vertex and assemble the symmetric `B`.
pub fn build_b_matrix(
    inst: &PlantedInstance,
    basis: &ThresholdBasis,
    t: f64,
    strategy: ColumnStrategy,
) -> Result<BMatrixOutcome> {
    let n = inst.n();
    let mut b = DMatrix::zeros(n, n);
    if basis.is_empty() {
        return Ok(BMatrixOutcome::Built(b));
    }
    let emb = spectral_embedding(basis);
    let outside = inst.outside();
    let columns: Vec<(usize, Vec<usize>, LpOutcome)> = outside
        .par_iter()
        .map(|&j| {
            let nbrs: Vec<usize> = inst
                .graph
                .neighbors(j)
                .iter()
                .copied()
                .filter(|&i| emb.position(i).is_some())
                .collect();
            let w = DMatrix::from_fn(emb.dim(), nbrs.len(), |r, c| emb.w[(r, emb.position(nbrs[c]).unwrap())]);
            let rhs = lp_rhs(j, &emb, inst);
            let out = match strategy {
                ColumnStrategy::Vertex => solve_bounded_lp(&w, &rhs, t),
                ColumnStrategy::MinMaxEntry => solve_min_cap_lp(&w, &rhs, t, 1e-6),
            };
            out.map(|out| (j, nbrs, out))
        })
        .collect::<Result<_>>()?;

    let mut failures = Vec::new();
    for (j, nbrs, out) in columns {
        match out {
            LpOutcome::Feasible(x) => {
                for (c, &i) in nbrs.iter().enumerate() {
                    b[(i, j)] = x[c];
                    b[(j, i)] = x[c];
                }
            }
            LpOutcome::Infeasible(certificate) => failures.push(ColumnFailure { column: j, certificate }),
        }
    }
    if failures.is_empty() {
        Ok(BMatrixOutcome::Built(b))
    } else {
        Ok(BMatrixOutcome::Infeasible(failures))
    }
}

#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub beta: f64,
    pub gammas: Vec<f64>,
    pub b: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub t_cap: f64,
}

/// First nonzero entry of `b` off the allowed support, if any.
fn support_violation(inst: &PlantedInstance, b: &DMatrix<f64>) -> Option<(usize, usize)> {
    let in_s = inst.membership();
    let n = inst.n();
    for j in 0..n {
        for i in 0..n {
            let v = b[(i, j)];
            if v != 0.0 && (in_s[i] == in_s[j] || !inst.graph.has_edge(i, j) || v != b[(j, i)]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `Y = A + dI + B` with `β = -d`, `γ = 0`.
pub fn assemble_certificate(inst: &PlantedInstance, b: DMatrix<f64>, t_cap: f64) -> Result<DualCertificate> {
    let n = inst.n();
    if b.shape() != (n, n) {
        return Err(Error::NotSquare(b.nrows(), b.ncols()));
    }
    if let Some((i, j)) = support_violation(inst, &b) {
        return Err(Error::SupportViolation(i, j));
    }
    let d = inst.params.d as f64;
    let y = inst.graph.adjacency_matrix() + DMatrix::<f64>::identity(n, n) * d + &b;
    Ok(DualCertificate {
        beta: -d,
        gammas: vec![0.0; n],
        b,
        y,
        t_cap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyTolerances {
    /// `λ_min(Y) >= -psd ‖Y‖`.
    pub psd: f64,
    /// `λ_2(Y) >= rank ‖Y‖`.
    pub rank: f64,
    /// `|gᵀ Y g| <= slackness ‖Y‖`.
    pub slackness: f64,
    /// Absolute calibration residual.
    pub calibration: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        VerifyTolerances {
            psd: 1e-6,
            rank: 1e-9,
            slackness: 1e-6,
            calibration: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub y_norm: f64,
    pub lambda_min: f64,
    pub lambda_2: f64,
    pub psd: bool,
    pub rank: bool,
    pub slackness_value: f64,
    pub slackness: bool,
    pub calibration_residual: f64,
    pub calibration: bool,
    /// `max_{l,j} |(Y v⁽ˡ⁾)_j - (d + λ_l) v⁽ˡ⁾_j|` over padded basis vectors.
    pub eigenvector_residual: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub t_cap: f64,
    pub cap: bool,
    pub cap_witness: Option<(usize, usize)>,
    pub b_norm: f64,
    pub norm_bound: f64,
    pub norm: bool,
    pub entrywise_norm_bound: f64,
    pub entrywise_norm: bool,
    pub support: bool,
    pub support_witness: Option<(usize, usize)>,
    /// `|⟨v_1(Y), g⟩|`; 1 when the null space is spanned by the signed indicator.
    pub null_alignment: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.psd && self.rank && self.slackness && self.calibration && self.cap && self.norm && self.support
    }
}

pub fn verify_certificate(
    cert: &DualCertificate,
    inst: &PlantedInstance,
    basis: &ThresholdBasis,
    tol: &VerifyTolerances,
) -> Result<VerificationReport> {
    let n = inst.n();
    let params = &inst.params;
    let spectrum = symmetric_eig(&cert.y)?;
    let ev = &spectrum.eigenvalues;
    let y_norm = ev.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let lambda_min = ev.first().copied().unwrap_or(0.0);
    let lambda_2 = ev.get(1).copied().unwrap_or(f64::INFINITY);

    let g = inst.unit_indicator();
    let slackness_value = (g.transpose() * &cert.y * &g)[(0, 0)];
    let null_alignment = if n > 0 { spectrum.vector(0).dot(&g).abs() } else { 0.0 };

    // calibration: Σ_{i∈S} v_i (A_ij + B_ij) for j ∉ S, and the full eigenvector identity
    let padded = basis.padded();
    let yv = &cert.y * &padded;
    let in_s = inst.membership();
    let d = params.d as f64;
    let (mut calibration_residual, mut eigenvector_residual) = (0.0f64, 0.0f64);
    for (l, &lambda) in basis.eigenvalues.iter().enumerate() {
        for j in 0..n {
            let r = (yv[(j, l)] - (d + lambda) * padded[(j, l)]).abs();
            eigenvector_residual = eigenvector_residual.max(r);
            if !in_s[j] {
                calibration_residual = calibration_residual.max(r);
            }
        }
    }

    let (mut b_min, mut b_max) = (0.0f64, 0.0f64);
    let mut cap_witness = None;
    for j in 0..n {
        for i in 0..n {
            let v = cert.b[(i, j)];
            b_min = b_min.min(v);
            b_max = b_max.max(v);
            if cap_witness.is_none() && (v < 0.0 || v > cert.t_cap) {
                cap_witness = Some((i, j));
            }
        }
    }
    let b_norm = spectral_norm(&cert.b)?;
    let norm_bound = b_norm_bound(params);
    let entrywise_bound = entrywise_norm_bound(params, cert.t_cap);
    let support_witness = support_violation(inst, &cert.b);

    Ok(VerificationReport {
        y_norm,
        lambda_min,
        lambda_2,
        psd: lambda_min >= -tol.psd * y_norm,
        rank: lambda_2 >= tol.rank * y_norm,
        slackness_value,
        slackness: slackness_value.abs() <= tol.slackness * y_norm.max(1.0),
        calibration_residual,
        calibration: calibration_residual <= tol.calibration,
        eigenvector_residual,
        b_min,
        b_max,
        t_cap: cert.t_cap,
        cap: cap_witness.is_none(),
        cap_witness,
        b_norm,
        norm_bound,
        norm: b_norm <= norm_bound,
        entrywise_norm_bound: entrywise_bound,
        entrywise_norm: b_norm <= entrywise_bound * (1.0 + 1e-12),
        support: support_witness.is_none(),
        support_witness,
        null_alignment,
    })
}

/// Everything produced by one certificate run.
#[derive(Debug, Clone)]
pub struct CertificateRun {
    pub basis: ThresholdBasis,
    pub t: f64,
    pub outcome: std::result::Result<(DualCertificate, VerificationReport), Vec<ColumnFailure>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyConfig {
    /// Threshold; `((1/2 - α)/(1/2 + α)) d` when absent.
    pub tau: Option<f64>,
    /// Entry cap; [`default_t`] when absent.
    pub t: Option<f64>,
    pub strategy: ColumnStrategy,
    pub tol: VerifyTolerances,
}

/// Basis, `t`, `B`, assembly and verification.
pub fn certify(inst: &PlantedInstance, cfg: &CertifyConfig) -> Result<CertificateRun> {
    let tau = cfg.tau.unwrap_or_else(|| inst.params.tau());
    let basis = threshold_basis(inst, tau)?;
    let t = cfg.t.unwrap_or_else(|| default_t(&inst.params, basis.len()));
    // t = 0 only arises with an empty basis, where B vanishes anyway
    let t_lp = if t > 0.0 { t } else { 1.0 };
    let outcome = match build_b_matrix(inst, &basis, t_lp, cfg.strategy)? {
        BMatrixOutcome::Built(b) => {
            let cert = assemble_certificate(inst, b, t_lp)?;
            let report = verify_certificate(&cert, inst, &basis, &cfg.tol)?;
            Ok((cert, report))
        }
        BMatrixOutcome::Infeasible(f) => Err(f),
    };
    Ok(CertificateRun { basis, t, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{threshold_rank, Graph};
    use crate::instance::{gen_random_planted, gen_regular_bipartite, BipartiteTopology};
    use crate::seed::rng_from_seed;

    fn k22_alone() -> PlantedInstance {
        PlantedInstance {
            graph: Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap(),
            s1: vec![0, 1],
            s2: vec![2, 3],
            params: ModelParams::new(4, 4, 2, 0.5).unwrap(),
            seed: 0,
            adversary_edges: vec![],
        }
    }

    #[test]
    fn complete_block_has_single_threshold_vector() {
        let inst = gen_random_planted(ModelParams::new(30, 10, 5, 0.5).unwrap(), &BipartiteTopology::CompleteBalanced, 1).unwrap();
        let basis = threshold_basis(&inst, 2.5).unwrap();
        assert_eq!(basis.len(), 1);
        let g = inst.unit_indicator();
        let v = basis.padded().column(0).into_owned();
        assert!((v.dot(&g).abs() - 1.0).abs() < 1e-10);

        let emb = spectral_embedding(&basis);
        assert!(emb.w.iter().all(|&x| (x.abs() - 1.0 / 10f64.sqrt()).abs() < 1e-10));
        assert!((emb.gram()[(0, 0)] - 1.0).abs() < 1e-10);
        assert!(threshold_basis(&inst, 5.0 + 1e-3).unwrap().is_empty());
        assert!(threshold_basis(&inst, 0.0).is_err());
    }

    #[test]
    fn circulant_count_matches_spectrum() {
        let g = gen_regular_bipartite(20, 4, &BipartiteTopology::Circulant(vec![]), &mut rng_from_seed(0)).unwrap();
        let a = g.adjacency_matrix();
        let basis = ThresholdBasis::from_block(&a, (0..20).collect(), 20, 2.0).unwrap();
        let direct = symmetric_eig(&a).unwrap().eigenvalues.iter().filter(|&&l| l <= -2.0 + 1e-9).count();
        assert_eq!(basis.len(), direct);
        assert_eq!(basis.len(), threshold_rank(&symmetric_eig(&a).unwrap(), 2.0 - 1e-9));
    }

    #[test]
    fn rhs_examples() {
        let inst = gen_random_planted(ModelParams::new(40, 12, 4, 1.0).unwrap(), &BipartiteTopology::RandomRegular, 2).unwrap();
        let basis = threshold_basis(&inst, 2.0).unwrap();
        let emb = spectral_embedding(&basis);
        for j in inst.outside() {
            assert!(lp_rhs(j, &emb, &inst).amax() < 1e-12);
        }
        let inst0 = gen_random_planted(ModelParams::new(40, 12, 4, 0.0).unwrap(), &BipartiteTopology::RandomRegular, 2).unwrap();
        let basis0 = threshold_basis(&inst0, 2.0).unwrap();
        let emb0 = spectral_embedding(&basis0);
        for j in inst0.outside() {
            assert_eq!(lp_rhs(j, &emb0, &inst0), DVector::zeros(basis0.len()));
        }
    }

    #[test]
    fn rhs_matches_double_sum() {
        let inst = gen_random_planted(ModelParams::new(50, 16, 6, 0.4).unwrap(), &BipartiteTopology::RandomRegular, 3).unwrap();
        let basis = threshold_basis(&inst, 3.0).unwrap();
        let emb = spectral_embedding(&basis);
        let a = inst.graph.adjacency_matrix();
        let padded = basis.padded();
        for j in inst.outside() {
            let b = lp_rhs(j, &emb, &inst);
            for l in 0..basis.len() {
                let direct: f64 = -(0..50).map(|i| a[(i, j)] * padded[(i, l)]).sum::<f64>();
                assert!((b[l] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn p_one_gives_zero_b() {
        let inst = gen_random_planted(ModelParams::new(30, 10, 4, 1.0).unwrap(), &BipartiteTopology::RandomRegular, 5).unwrap();
        let basis = threshold_basis(&inst, 2.0).unwrap();
        let BMatrixOutcome::Built(b) = build_b_matrix(&inst, &basis, 1.0, ColumnStrategy::Vertex).unwrap() else {
            panic!("p = 1 columns are trivially feasible")
        };
        assert!(b.amax() < 1e-10);
    }

    #[test]
    fn k22_certificate_passes() {
        let inst = k22_alone();
        let basis = threshold_basis(&inst, 1.0).unwrap();
        let cert = assemble_certificate(&inst, DMatrix::zeros(4, 4), 1.0).unwrap();
        let ev = symmetric_eig(&cert.y).unwrap().eigenvalues;
        for (got, want) in ev.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let u = inst.signed_indicator();
        assert!((u.transpose() * &cert.y * &u)[(0, 0)].abs() < 1e-12);
        let report = verify_certificate(&cert, &inst, &basis, &VerifyTolerances::default()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!((report.null_alignment - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corrupted_b_is_located() {
        let inst = gen_random_planted(ModelParams::new(20, 8, 3, 0.5).unwrap(), &BipartiteTopology::RandomRegular, 8).unwrap();
        let basis = threshold_basis(&inst, 1.5).unwrap();
        let s = inst.planted_set();
        let (i, j) = s
            .iter()
            .flat_map(|&i| inst.outside().into_iter().map(move |j| (i, j)))
            .find(|&(i, j)| inst.graph.has_edge(i, j))
            .unwrap();
        let mut b = DMatrix::zeros(20, 20);
        b[(i, j)] = -0.5;
        b[(j, i)] = -0.5;
        let cert = assemble_certificate(&inst, b.clone(), 1.0).unwrap();
        let report = verify_certificate(&cert, &inst, &basis, &VerifyTolerances::default()).unwrap();
        assert!(!report.cap);
        assert!(report.cap_witness == Some((i.max(j), i.min(j))) || report.cap_witness == Some((i, j)) || report.cap_witness == Some((j, i)));

        // an entry inside S is a support violation at assembly time
        let mut bad = DMatrix::zeros(20, 20);
        bad[(s[0], s[1])] = 0.1;
        bad[(s[1], s[0])] = 0.1;
        assert!(matches!(assemble_certificate(&inst, bad, 1.0), Err(Error::SupportViolation(..))));
    }

    #[test]
    fn sparse_columns_come_with_farkas_witnesses() {
        let inst = gen_random_planted(ModelParams::new(40, 12, 5, 0.5).unwrap(), &BipartiteTopology::RandomRegular, 4).unwrap();
        let basis = threshold_basis(&inst, 2.5).unwrap();
        let emb = spectral_embedding(&basis);
        let BMatrixOutcome::Infeasible(failures) = build_b_matrix(&inst, &basis, 50.0, ColumnStrategy::MinMaxEntry).unwrap() else {
            panic!("seed 4 has an outside vertex with too few planted neighbours")
        };
        for f in failures {
            let nbrs: Vec<usize> = inst.graph.neighbors(f.column).iter().copied().filter(|&i| emb.position(i).is_some()).collect();
            let w = DMatrix::from_fn(emb.dim(), nbrs.len(), |r, c| emb.w[(r, emb.position(nbrs[c]).unwrap())]);
            let b = lp_rhs(f.column, &emb, &inst);
            assert!(f.certificate.verify(&w, &b, 50.0, feasibility_tolerance(&b)));
        }
    }

    #[test]
    fn assembled_y_matches_formula() {
        let inst = gen_random_planted(ModelParams::new(40, 12, 5, 0.9).unwrap(), &BipartiteTopology::RandomRegular, 4).unwrap();
        let run = certify(&inst, &CertifyConfig { t: Some(50.0), ..Default::default() }).unwrap();
        let (cert, report) = run.outcome.expect("dense neighbourhoods keep every column feasible");
        assert!(report.calibration, "{report:?}");
        assert!(report.cap && report.support && report.entrywise_norm);
        let a = inst.graph.adjacency_matrix();
        for i in 0..40 {
            for j in 0..40 {
                let want = a[(i, j)] + if i == j { 5.0 } else { 0.0 } + cert.b[(i, j)];
                assert_eq!(cert.y[(i, j)], want);
            }
        }
    }
}
