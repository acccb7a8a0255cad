//! The ADMM solver against a log-barrier interior-point method on tiny graphs.

use nalgebra::{DMatrix, DVector};
use plantedbip::instance::{gen_random_planted, gnp, BipartiteTopology, ModelParams};
use plantedbip::sdp::{check_feasibility, sdp_objective, solve_primal_sdp, SolverConfig};
use plantedbip::seed::rng_from_seed;
use plantedbip::Graph;

/// Upper-triangular coordinates `(i, j)`, `i <= j`.
fn coords(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|j| (0..=j).map(move |i| (i, j))).collect()
}

fn to_matrix(x: &DVector<f64>, cs: &[(usize, usize)], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for (c, &(i, j)) in cs.iter().enumerate() {
        m[(i, j)] = x[c];
        m[(j, i)] = x[c];
    }
    m
}

struct Barrier<'a> {
    g: &'a Graph,
    n: usize,
    cap: f64,
    cs: Vec<(usize, usize)>,
    index: DMatrix<usize>,
}

impl<'a> Barrier<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let n = g.n();
        let cs = coords(n);
        let mut index = DMatrix::zeros(n, n);
        for (c, &(i, j)) in cs.iter().enumerate() {
            index[(i, j)] = c;
            index[(j, i)] = c;
        }
        Barrier { g, n, cap: 1.0 / k as f64, cs, index }
    }

    /// `t ⟨A, X⟩ - log det X - Σ log(cap - X_ii) - Σ_E log(-X_ij)`, or `None` outside the domain.
    fn value(&self, x: &DVector<f64>, t: f64) -> Option<f64> {
        let m = to_matrix(x, &self.cs, self.n);
        let chol = m.clone().cholesky()?;
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let mut f = t * sdp_objective(&m, self.g) - logdet;
        for i in 0..self.n {
            let s = self.cap - m[(i, i)];
            if s <= 0.0 {
                return None;
            }
            f -= s.ln();
        }
        for (i, j) in self.g.edges() {
            if m[(i, j)] >= 0.0 {
                return None;
            }
            f -= (-m[(i, j)]).ln();
        }
        Some(f)
    }

    fn gradient_hessian(&self, x: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let dim = self.cs.len();
        let m = to_matrix(x, &self.cs, n);
        let xi = m.try_inverse().unwrap();
        // X⁻¹ E_c for every coordinate
        let prods: Vec<DMatrix<f64>> = self
            .cs
            .iter()
            .map(|&(i, j)| {
                let mut e = DMatrix::zeros(n, n);
                e[(i, j)] = 1.0;
                e[(j, i)] = 1.0;
                &xi * e
            })
            .collect();
        let mut grad = DVector::zeros(dim);
        let mut hess = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            grad[c] = -prods[c].trace();
            for e in c..dim {
                let h = prods[c].component_mul(&prods[e].transpose()).sum();
                hess[(c, e)] = h;
                hess[(e, c)] = h;
            }
        }
        for i in 0..n {
            let c = self.index[(i, i)];
            let s = self.cap - x[c];
            grad[c] += 1.0 / s;
            hess[(c, c)] += 1.0 / (s * s);
        }
        for (i, j) in self.g.edges() {
            let c = self.index[(i, j)];
            grad[c] += t * 2.0 - 1.0 / x[c];
            hess[(c, c)] += 1.0 / (x[c] * x[c]);
        }
        (grad, hess)
    }

    fn solve(&self) -> DMatrix<f64> {
        let n = self.n;
        let dim = self.cs.len();
        // strictly feasible start: (I - c A) / n, renormalised to unit trace
        let a = self.g.adjacency_matrix();
        let c = 0.5 / (1.0 + a.row_sum().max());
        let start = (DMatrix::<f64>::identity(n, n) - a * c) / n as f64;
        let mut x = DVector::from_iterator(dim, self.cs.iter().map(|&(i, j)| start[(i, j)]));
        // x = x0 + P z keeps the trace fixed: the first diagonal coordinate absorbs every change
        let first = self.index[(0, 0)];
        let free: Vec<usize> = (0..dim).filter(|&c| c != first).collect();
        let p = DMatrix::from_fn(dim, dim - 1, |r, c| {
            let (i, j) = self.cs[free[c]];
            if r == free[c] {
                1.0
            } else if r == first && i == j {
                -1.0
            } else {
                0.0
            }
        });
        let barrier_terms = (2 * n + self.g.edge_count()) as f64;

        let mut t = 1.0;
        while barrier_terms / t > 1e-9 {
            for _ in 0..200 {
                let (grad, hess) = self.gradient_hessian(&x, t);
                let (g_red, h_red) = (p.transpose() * &grad, p.transpose() * &hess * &p);
                let Some(dz) = h_red.clone().cholesky().map(|c| c.solve(&(-&g_red))) else { break };
                let decrement = dz.dot(&(&h_red * &dz));
                if decrement / 2.0 < 1e-14 {
                    break;
                }
                let step = &p * dz;
                let f0 = self.value(&x, t).unwrap();
                let slope = grad.dot(&step);
                let mut s = 1.0;
                while s > 1e-16 {
                    let cand = &x + &step * s;
                    if let Some(f) = self.value(&cand, t) {
                        if f <= f0 + 0.25 * s * slope {
                            x = cand;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if s <= 1e-16 {
                    break;
                }
            }
            t *= 8.0;
        }
        to_matrix(&x, &self.cs, n)
    }
}

fn compare(g: &Graph, k: usize) {
    let reference = Barrier::new(g, k).solve();
    let admm = solve_primal_sdp(g, k, &SolverConfig::default()).unwrap();
    assert!(admm.converged);
    let rep = check_feasibility(&reference, g, k).unwrap();
    assert!(rep.within(1e-8), "{rep:?}");
    let (want, got) = (sdp_objective(&reference, g), admm.objective);
    assert!((want - got).abs() <= 1e-5, "barrier {want} admm {got}");
}

#[test]
fn agrees_on_random_graphs() {
    let mut rng = rng_from_seed(2024);
    for (p, k) in [(0.3, 4), (0.5, 4), (0.5, 6), (0.7, 3)] {
        let g = gnp(10, p, &mut rng);
        compare(&g, k);
    }
}

#[test]
fn agrees_on_planted_instances() {
    for seed in 0..3 {
        let params = ModelParams::new(10, 4, 2, 0.5).unwrap();
        let inst = gen_random_planted(params, &BipartiteTopology::RandomRegular, seed).unwrap();
        compare(&inst.graph, 4);
    }
}

#[test]
fn edgeless_graph_has_zero_optimum() {
    compare(&Graph::new(10), 5);
}
