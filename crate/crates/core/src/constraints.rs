//! Linear systems for constant-coefficient derivatives.
//!
//! The ansatz `∂_q = α∂₀ + β∂₁ + γ∂₂ + δ∂₃` is required to satisfy
//! `∂_q qⁿ = n qⁿ⁻¹`. Applying it to `qⁿ` and equating every monomial's four
//! real components gives a real linear system in the coefficient parameters:
//! 16 unknowns when the coefficients are quaternions acting from the left, 64
//! when they are general barred operators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::barred::BarredOperator;
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, QPolynomial, DEGREE_CAP};

/// Pivots smaller than this are treated as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-10;

const COEFF_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
const UNIT_NAMES: [&str; 4] = ["1", "i", "j", "k"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSpace {
    Plain,
    Barred,
}

impl CoefficientSpace {
    fn right_units(self) -> usize {
        match self {
            Self::Plain => 1,
            Self::Barred => 4,
        }
    }

    pub fn unknown_dim(self) -> usize {
        16 * self.right_units()
    }

    /// Slot index of the real parameter for `coefficient`, right unit and
    /// left component.
    pub fn slot(self, coefficient: usize, right: usize, left: usize) -> usize {
        assert!(right < self.right_units(), "plain coefficients have no right units");
        (coefficient * self.right_units() + right) * 4 + left
    }

    pub fn slot_label(self, slot: usize) -> SlotLabel {
        let left = slot % 4;
        let right = (slot / 4) % self.right_units();
        let coefficient = slot / (4 * self.right_units());
        SlotLabel {
            coefficient: COEFF_NAMES[coefficient],
            left: UNIT_NAMES[left],
            right: UNIT_NAMES[right],
        }
    }

    pub fn slot_labels(self) -> Vec<SlotLabel> {
        (0..self.unknown_dim()).map(|s| self.slot_label(s)).collect()
    }

    /// Maps a plain-space parameter vector into the barred space.
    pub fn embed_plain(v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), 16);
        let mut out = vec![0.0; 64];
        for coefficient in 0..4 {
            for left in 0..4 {
                out[Self::Barred.slot(coefficient, 0, left)] =
                    v[Self::Plain.slot(coefficient, 0, left)];
            }
        }
        out
    }
}

/// Which real parameter a slot holds: `coefficient` has the term
/// `left | right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotLabel {
    pub coefficient: &'static str,
    pub left: &'static str,
    pub right: &'static str,
}

impl fmt::Display for SlotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}|{}]", self.coefficient, self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeAnsatz {
    pub space: CoefficientSpace,
    /// `α, β, γ, δ`; plain ansätze only use the left factor of each.
    pub coeffs: [BarredOperator; 4],
}

impl DerivativeAnsatz {
    /// `∂_q = ∂₀`.
    pub fn identity(space: CoefficientSpace) -> Self {
        let mut coeffs = [BarredOperator::ZERO; 4];
        coeffs[0] = BarredOperator::IDENTITY;
        Self { space, coeffs }
    }

    pub fn plain(coeffs: [Quaternion; 4]) -> Self {
        Self { space: CoefficientSpace::Plain, coeffs: coeffs.map(BarredOperator::left) }
    }

    pub fn barred(coeffs: [BarredOperator; 4]) -> Self {
        Self { space: CoefficientSpace::Barred, coeffs }
    }

    /// The barred solution of the first- and second-order constraints:
    ///
    /// `α = 1 - i|i - j|j - k|k`, `2β = k|j - j|k`, `2γ = i|k - k|i`,
    /// `2δ = j|i - i|j`.
    pub fn barred_quadratic_solution() -> Self {
        let (one, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
        let bar = BarredOperator::sandwich;
        let alpha = BarredOperator::IDENTITY - bar(i, i) - bar(j, j) - bar(k, k);
        let beta = (bar(k, j) - bar(j, k)).scale(0.5);
        let gamma = (bar(i, k) - bar(k, i)).scale(0.5);
        let delta = (bar(j, i) - bar(i, j)).scale(0.5);
        debug_assert_eq!(alpha.apply(one), Quaternion::from(4.0));
        Self::barred([alpha, beta, gamma, delta])
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.space.unknown_dim()];
        for (a, op) in self.coeffs.iter().enumerate() {
            for right in 0..self.space.right_units() {
                for (left, x) in op.coeffs[right].to_array().into_iter().enumerate() {
                    v[self.space.slot(a, right, left)] = x;
                }
            }
        }
        v
    }

    pub fn from_vector(space: CoefficientSpace, v: &[f64]) -> Self {
        assert_eq!(v.len(), space.unknown_dim(), "parameter vector length");
        let coeffs = std::array::from_fn(|a| {
            let mut op = BarredOperator::ZERO;
            for right in 0..space.right_units() {
                op.coeffs[right] = Quaternion::from_array(std::array::from_fn(|left| {
                    v[space.slot(a, right, left)]
                }));
            }
            op
        });
        Self { space, coeffs }
    }

    pub fn apply(&self, p: &QPolynomial) -> QPolynomial {
        self.coeffs
            .iter()
            .enumerate()
            .fold(QPolynomial::zero(), |acc, (a, op)| acc.add(&p.partial(a).apply_barred(op)))
    }

    /// `table[c][b]` is coefficient `c` (α..δ) applied to basis element `b`
    /// (1, i, j, k).
    pub fn action_table(&self) -> [[Quaternion; 4]; 4] {
        self.coeffs.map(|op| Quaternion::BASIS.map(|e| op.apply(e)))
    }
}

/// Where a row of the system comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowProvenance {
    pub order: u32,
    pub monomial: MultiIndex,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSystem {
    pub space: CoefficientSpace,
    pub unknown_dim: usize,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub provenance: Vec<RowProvenance>,
}

impl ConstraintSystem {
    pub fn residual(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.unknown_dim);
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() - b)
            .collect()
    }

    pub fn max_residual(&self, v: &[f64]) -> f64 {
        self.residual(v).iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Reorders rows: row `n` of the result is row `perm[n]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows.len());
        Self {
            space: self.space,
            unknown_dim: self.unknown_dim,
            rows: perm.iter().map(|&p| self.rows[p].clone()).collect(),
            rhs: perm.iter().map(|&p| self.rhs[p]).collect(),
            provenance: perm.iter().map(|&p| self.provenance[p]).collect(),
        }
    }
}

fn normalized_orders(orders: &[u32]) -> Result<Vec<u32>> {
    if orders.is_empty() {
        return Err(Error::EmptyOrders);
    }
    if let Some(&bad) = orders.iter().find(|&&n| n == 0 || n > DEGREE_CAP) {
        return Err(Error::InvalidOrder(bad));
    }
    let mut v = orders.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

pub fn build_system(orders: &[u32], space: CoefficientSpace) -> Result<ConstraintSystem> {
    let orders = normalized_orders(orders)?;
    let q = QPolynomial::variable();
    let dim = space.unknown_dim();
    let mut system = ConstraintSystem {
        space,
        unknown_dim: dim,
        rows: Vec::new(),
        rhs: Vec::new(),
        provenance: Vec::new(),
    };
    for n in orders {
        let power = q.pow(n)?;
        let target = q.pow(n - 1)?.scale(f64::from(n));
        let columns: Vec<QPolynomial> = (0..dim)
            .map(|slot| {
                let mut unit = vec![0.0; dim];
                unit[slot] = 1.0;
                DerivativeAnsatz::from_vector(space, &unit).apply(&power)
            })
            .collect();
        for monomial in MultiIndex::all_of_degree(n - 1) {
            for component in 0..4 {
                system.rows.push(
                    columns
                        .iter()
                        .map(|col| col.coeff(monomial).to_array()[component])
                        .collect(),
                );
                system.rhs.push(target.coeff(monomial).to_array()[component]);
                system.provenance.push(RowProvenance { order: n, monomial, component });
            }
        }
    }
    Ok(system)
}

/// Affine solution set `particular + span(nullspace_basis)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSpace {
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<f64>>,
    pub nullspace_basis: Vec<Vec<f64>>,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub free_columns: Vec<usize>,
}

impl SolutionSpace {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    pub fn dimension(&self) -> usize {
        self.nullspace_basis.len()
    }

    pub fn is_unique(&self) -> bool {
        self.is_consistent() && self.nullspace_basis.is_empty()
    }

    /// Whether `v` lies in the affine set.
    ///
    /// Each basis vector is 1 on its own free column and 0 on the others, so
    /// the free coordinates of `v - particular` fix the combination; `v` is
    /// a member iff that combination reproduces it.
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        let Some(p) = &self.particular else {
            return false;
        };
        let d: Vec<f64> = v.iter().zip(p).map(|(a, b)| a - b).collect();
        let mut rebuilt = vec![0.0; d.len()];
        for (basis, &free) in self.nullspace_basis.iter().zip(&self.free_columns) {
            rebuilt.iter_mut().zip(basis).for_each(|(r, b)| *r += d[free] * b);
        }
        rebuilt.iter().zip(&d).all(|(r, x)| (r - x).abs() <= tol)
    }
}

/// Gauss-Jordan elimination with partial pivoting.
pub fn solve(system: &ConstraintSystem) -> SolutionSpace {
    let n = system.unknown_dim;
    let mut a: Vec<Vec<f64>> = system
        .rows
        .iter()
        .zip(&system.rhs)
        .map(|(row, &b)| row.iter().copied().chain(std::iter::once(b)).collect())
        .collect();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut free = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let best = (r..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()));
        match best {
            Some(p) if a[p][col].abs() >= PIVOT_THRESHOLD => {
                a.swap(r, p);
                let pivot = a[r][col];
                a[r].iter_mut().for_each(|x| *x /= pivot);
                let pivot_row = a[r].clone();
                for (i, row) in a.iter_mut().enumerate() {
                    if i == r || row[col] == 0.0 {
                        continue;
                    }
                    let factor = row[col];
                    row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= factor * p);
                }
                pivots.push(col);
                r += 1;
            }
            _ => free.push(col),
        }
    }
    let rank = pivots.len();
    let consistent = a[rank..].iter().all(|row| row[n].abs() < PIVOT_THRESHOLD);
    let particular = consistent.then(|| {
        let mut x = vec![0.0; n];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = a[k][n];
        }
        x
    });
    let nullspace_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0.0; n];
            v[f] = 1.0;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[k][f];
            }
            v
        })
        .collect();
    SolutionSpace { particular, nullspace_basis, rank, pivot_columns: pivots, free_columns: free }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderResidual {
    pub order: u32,
    /// `∂_q qⁿ - n qⁿ⁻¹`.
    pub residual: QPolynomial,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnsatzCheck {
    pub residuals: Vec<OrderResidual>,
    pub action_table: [[Quaternion; 4]; 4],
}

impl AnsatzCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.residual_norm))
    }
}

/// Applies the ansatz to `qⁿ` symbolically, independent of any system.
pub fn verify_ansatz(ansatz: &DerivativeAnsatz, orders: &[u32]) -> Result<AnsatzCheck> {
    let q = QPolynomial::variable();
    let residuals = normalized_orders(orders)?
        .into_iter()
        .map(|n| {
            let residual = ansatz
                .apply(&q.pow(n)?)
                .sub(&q.pow(n - 1)?.scale(f64::from(n)));
            Ok(OrderResidual { order: n, residual_norm: residual.max_abs_coeff(), residual })
        })
        .collect::<Result<_>>()?;
    Ok(AnsatzCheck { residuals, action_table: ansatz.action_table() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use CoefficientSpace::{Barred, Plain};

    const ONE: Quaternion = Quaternion::ONE;
    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const Z: Quaternion = Quaternion::ZERO;

    /// Row of the system evaluated on a plain ansatz, for hand-derived checks.
    fn row_block(system: &ConstraintSystem, order: u32, monomial: MultiIndex) -> Vec<usize> {
        system
            .provenance
            .iter()
            .enumerate()
            .filter(|(_, p)| p.order == order && p.monomial == monomial)
            .map(|(n, _)| n)
            .collect()
    }

    fn eval_block(system: &ConstraintSystem, rows: &[usize], v: &[f64]) -> Quaternion {
        let r: Vec<f64> = rows
            .iter()
            .map(|&n| system.rows[n].iter().zip(v).map(|(a, x)| a * x).sum())
            .collect();
        Quaternion::new(r[0], r[1], r[2], r[3])
    }

    #[test]
    fn slots_and_labels() {
        assert_eq!(Plain.unknown_dim(), 16);
        assert_eq!(Barred.unknown_dim(), 64);
        assert_eq!(Barred.slot_label(Barred.slot(1, 2, 3)).to_string(), "beta[k|j]");
        assert_eq!(Plain.slot_label(Plain.slot(3, 0, 1)).to_string(), "delta[i|1]");
        let a = DerivativeAnsatz::barred_quadratic_solution();
        assert_eq!(DerivativeAnsatz::from_vector(Barred, &a.to_vector()), a);
    }

    #[test]
    fn first_order_block() {
        let s = build_system(&[1], Plain).unwrap();
        assert_eq!(s.rows.len(), 4);
        // α + βi + γj + δk with arbitrary quaternions
        let (al, be, ga, de) = (
            Quaternion::new(1.0, 2.0, 0.0, -1.0),
            Quaternion::new(0.5, 0.0, 1.0, 3.0),
            Quaternion::new(-2.0, 1.0, 1.0, 0.0),
            Quaternion::new(0.0, 0.0, 4.0, 1.0),
        );
        let v = DerivativeAnsatz::plain([al, be, ga, de]).to_vector();
        let lhs = eval_block(&s, &row_block(&s, 1, MultiIndex::ONE), &v);
        assert_eq!(lhs, al + be * I + ga * J + de * K);
        assert_eq!(s.rhs, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn second_order_blocks() {
        let s = build_system(&[2], Plain).unwrap();
        let (al, be, ga, de) = (
            Quaternion::new(1.0, 2.0, 0.0, -1.0),
            Quaternion::new(0.5, 0.0, 1.0, 3.0),
            Quaternion::new(-2.0, 1.0, 1.0, 0.0),
            Quaternion::new(0.0, 0.0, 4.0, 1.0),
        );
        let v = DerivativeAnsatz::plain([al, be, ga, de]).to_vector();
        // the x1 coefficient of ∂_q q² is 2αi - 2β; γ and δ drop out by
        // anticommutation
        let x1 = eval_block(&s, &row_block(&s, 2, MultiIndex::unit(1)), &v);
        assert_eq!(x1, (al * I - be).scale(2.0));
        let x2 = eval_block(&s, &row_block(&s, 2, MultiIndex::unit(2)), &v);
        assert_eq!(x2, (al * J - ga).scale(2.0));
        let x3 = eval_block(&s, &row_block(&s, 2, MultiIndex::unit(3)), &v);
        assert_eq!(x3, (al * K - de).scale(2.0));
    }

    #[test]
    fn empty_orders_rejected() {
        assert_eq!(build_system(&[], Plain), Err(Error::EmptyOrders));
        assert_eq!(build_system(&[0], Barred), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn plain_quadratic_is_trivial() {
        let sol = solve(&build_system(&[1, 2], Plain).unwrap());
        assert!(sol.is_unique());
        let v = sol.particular.unwrap();
        assert_eq!(v, DerivativeAnsatz::identity(Plain).to_vector());
    }

    #[test]
    fn quadratic_ansatz_action_table() {
        let t = DerivativeAnsatz::barred_quadratic_solution().action_table();
        assert_eq!(t.map(|row| row[0]), [Quaternion::from(4.0), -I, -J, -K]);
        assert_eq!(t[0][1..], [Z, Z, Z]);
        assert_eq!(t[1][1..], [-ONE, Z, Z]);
        assert_eq!(t[2][1..], [Z, -ONE, Z]);
        assert_eq!(t[3][1..], [Z, Z, -ONE]);
    }

    #[test]
    fn quadratic_ansatz_membership() {
        let a = DerivativeAnsatz::barred_quadratic_solution();
        let v = a.to_vector();
        let s12 = build_system(&[1, 2], Barred).unwrap();
        assert!(s12.max_residual(&v) <= 1e-12);
        let sol = solve(&s12);
        assert!(sol.contains(&v, 1e-10));
        assert!(verify_ansatz(&a, &[1, 2]).unwrap().max_residual() <= 1e-12);

        let s123 = build_system(&[1, 2, 3], Barred).unwrap();
        assert!(s123.max_residual(&v) > 1e-6);
        assert!(!solve(&s123).contains(&v, 1e-10));
    }

    #[test]
    fn identity_ansatz_satisfies_all_orders() {
        for space in [Plain, Barred] {
            let check = verify_ansatz(&DerivativeAnsatz::identity(space), &[1, 2, 3, 4, 5]).unwrap();
            assert_eq!(check.max_residual(), 0.0);
        }
    }

    #[test]
    fn solution_space_reconstructs() {
        for (space, orders) in [(Barred, vec![1, 2]), (Barred, vec![1, 2, 3]), (Plain, vec![1])] {
            let s = build_system(&orders, space).unwrap();
            let sol = solve(&s);
            let p = sol.particular.clone().unwrap();
            assert!(s.max_residual(&p) <= 1e-10);
            let check = verify_ansatz(&DerivativeAnsatz::from_vector(space, &p), &orders).unwrap();
            assert!(check.max_residual() <= 1e-10);
            for basis in &sol.nullspace_basis {
                let shifted: Vec<f64> = p.iter().zip(basis).map(|(a, b)| a + b).collect();
                let check = verify_ansatz(&DerivativeAnsatz::from_vector(space, &shifted), &orders).unwrap();
                assert!(check.max_residual() <= 1e-10);
            }
        }
    }

    #[test]
    fn plain_embeds_into_barred() {
        let plain = solve(&build_system(&[1, 2], Plain).unwrap());
        let barred = solve(&build_system(&[1, 2], Barred).unwrap());
        let embedded = CoefficientSpace::embed_plain(plain.particular.as_ref().unwrap());
        assert!(barred.contains(&embedded, 1e-10));
        let plain1 = solve(&build_system(&[1], Plain).unwrap());
        let barred1 = solve(&build_system(&[1], Barred).unwrap());
        for b in &plain1.nullspace_basis {
            let p = plain1.particular.as_ref().unwrap();
            let v: Vec<f64> = p.iter().zip(b).map(|(x, y)| x + 2.5 * y).collect();
            assert!(barred1.contains(&CoefficientSpace::embed_plain(&v), 1e-10));
        }
    }

    #[test]
    fn rank_is_permutation_invariant() {
        let s = build_system(&[1, 2], Barred).unwrap();
        let rank = solve(&s).rank;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut perm: Vec<usize> = (0..s.rows.len()).collect();
        for _ in 0..10 {
            perm.shuffle(&mut rng);
            assert_eq!(solve(&s.permute_rows(&perm)).rank, rank);
        }
    }

    #[test]
    fn inconsistent_system_has_no_particular() {
        let mut s = build_system(&[1], Plain).unwrap();
        s.rows.push(s.rows[0].clone());
        s.rhs.push(s.rhs[0] + 1.0);
        s.provenance.push(s.provenance[0]);
        let sol = solve(&s);
        assert!(!sol.is_consistent());
        assert!(!sol.contains(&DerivativeAnsatz::identity(Plain).to_vector(), 1e-10));
    }
}
