//! Partitions, Dynkin labels and the SU(d) -> SU(d-1) x U(1) branching rule.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Weakly decreasing list of non-negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("parts {parts:?} are not non-increasing")));
        }
        Ok(Partition { parts })
    }

    /// Highest weight partition [2j, j, ..., j, 0] of the d-part family.
    pub fn family(d: usize, j: u32) -> Self {
        let mut parts = vec![j; d];
        parts[0] = 2 * j;
        parts[d - 1] = 0;
        Partition { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Shifts all parts so that the last one is zero.
    pub fn pinned(&self) -> Partition {
        let last = self.parts.last().copied().unwrap_or(0);
        Partition { parts: self.parts.iter().map(|p| p - last).collect() }
    }

    pub fn dynkin(&self) -> DynkinLabel {
        DynkinLabel { coeffs: self.parts.windows(2).map(|w| w[0] - w[1]).collect() }
    }

    pub fn interlaces(&self, lambda: &Partition) -> bool {
        self.len() + 1 == lambda.len()
            && self.parts.iter().enumerate().all(|(i, &m)| lambda.parts[i] >= m && m >= lambda.parts[i + 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DynkinLabel {
    pub coeffs: Vec<u32>,
}

impl DynkinLabel {
    /// Index i when the label is that of the family irrep with parameter i.
    pub fn family_index(&self) -> Option<u32> {
        match self.coeffs.as_slice() {
            [] => Some(0),
            [a] => (a % 2 == 0).then_some(a / 2),
            [first, middle @ .., last] => {
                (first == last && middle.iter().all(|&m| m == 0)).then_some(*first)
            }
        }
    }
}

/// One SU(d-1) x U(1) block in the restriction of an SU(d) irrep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchBlock {
    pub mu: Partition,
    pub u1_charge: (i128, i128),
    pub su_dim: u64,
}

impl BranchBlock {
    pub fn charge(&self) -> Rational {
        Rational::new(self.u1_charge.0, self.u1_charge.1)
    }
}

/// D_j^d from the closed product formula.
pub fn dimension_formula(d: usize, j: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let j = j as i128;
    let mut value = Rational::new(2 * j, d as i128 - 1) + Rational::from_integer(1);
    for k in 1..=(d as i128 - 2) {
        let f = Rational::from_integer(1) + Rational::new(j, k);
        value *= f * f;
    }
    if !value.is_integer() {
        return Err(Error::Structural(format!("dimension formula produced non-integer {value}")));
    }
    Ok(value.to_integer() as u64)
}

/// All interlacing partitions of `lambda`, in decreasing lexicographic order.
pub fn interlacings(lambda: &Partition) -> Vec<Partition> {
    let d = lambda.len();
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d - 1);
    fn rec(lambda: &[u32], i: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i + 1 == lambda.len() {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for m in (lambda[i + 1]..=lambda[i]).rev() {
            current.push(m);
            rec(lambda, i + 1, current, out);
            current.pop();
        }
    }
    rec(&lambda.parts, 0, &mut current, &mut out);
    out
}

pub fn u1_charge(lambda: &Partition, mu: &Partition) -> Result<Rational> {
    if !mu.interlaces(lambda) {
        return Err(Error::InvalidArgument(format!("{:?} does not interlace {:?}", mu.parts, lambda.parts)));
    }
    let d = lambda.len() as i128;
    Ok(Rational::from_integer(lambda.size() as i128) - Rational::new(d, d - 1) * Rational::from_integer(mu.size() as i128))
}

/// Weyl dimension of the SU(n) irrep with highest weight `mu` (n = number of parts).
pub fn su_dim(mu: &Partition) -> u64 {
    let p = &mu.parts;
    let mut value = Rational::from_integer(1);
    for a in 0..p.len() {
        for b in (a + 1)..p.len() {
            let num = p[a] as i128 - p[b] as i128 + (b - a) as i128;
            value *= Rational::new(num, (b - a) as i128);
        }
    }
    debug_assert!(value.is_integer());
    value.to_integer() as u64
}

pub fn branch(lambda: &Partition) -> Result<Vec<BranchBlock>> {
    interlacings(lambda)
        .into_iter()
        .map(|mu| {
            let q = u1_charge(lambda, &mu)?;
            Ok(BranchBlock { su_dim: su_dim(&mu), u1_charge: (*q.numer(), *q.denom()), mu })
        })
        .collect()
}

/// A zero-charge block in the restriction of D_j^d, labelled for SU(d-1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroChargeBlock {
    pub label: DynkinLabel,
    pub family_index: Option<u32>,
    pub dim: u64,
}

/// SU(d-1) Dynkin labels of the zero U(1) charge blocks of D_j^d, ordered by family index.
pub fn branch_zero_charge(d: usize, j: u32) -> Result<Vec<ZeroChargeBlock>> {
    if d < 3 {
        return Err(Error::InvalidArgument("branching to SU(d-1) needs d >= 3".into()));
    }
    let lambda = Partition::family(d, j);
    let mut out: Vec<ZeroChargeBlock> = branch(&lambda)?
        .into_iter()
        .filter(|b| b.u1_charge.0 == 0)
        .map(|b| {
            let label = b.mu.pinned().dynkin();
            ZeroChargeBlock { family_index: label.family_index(), dim: b.su_dim, label }
        })
        .collect();
    out.sort_by_key(|b| (b.family_index.unwrap_or(u32::MAX), b.label.clone()));
    Ok(out)
}
