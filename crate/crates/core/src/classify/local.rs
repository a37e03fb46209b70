//! Local colengths by truncated linear algebra.
//!
//! For an ideal `J` generated by germs vanishing at the origin, the
//! colength `dim k[[x]]/J` is recovered from the finite quotients
//! `A_N = k[x]/(J + m^N)`: their dimensions grow monotonically and
//! stabilize exactly at the colength.  One stabilization step certifies the
//! answer: `dim A_N = dim A_{N+1}` forces `m^N ⊆ J + m^{N+1}`, hence
//! `m^N ⊆ J + m^{N+k}` for every `k` by induction, hence `m^N ⊆ J` by
//! Krull's intersection theorem.  Each `dim A_N` is a rank computation over
//! the monomials of degree below `N`, so the whole procedure is exact
//! rational Gaussian elimination of bounded size — no term-order reductions
//! whose length cannot be predicted in advance.

use num_rational::BigRational;
use num_traits::Zero;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// The colength of the ideal generated by `gens` in the local ring at the
/// origin, certified exactly when it stabilizes within the probe window:
/// `Some(c)` is the exact colength, while `None` means the colength exceeds
/// `cap` (possibly infinite — the two cases are indistinguishable within
/// the window).
pub(crate) fn local_colength_within(
    gens: &[MultiPoly],
    cap: usize,
    budget: &Budget,
) -> Result<Option<usize>> {
    let live: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    if live.is_empty() {
        return Ok(None);
    }
    for g in &live {
        for (_, c) in g.terms() {
            if c.as_rational().is_none() {
                return Err(Error::Unsupported(
                    "local colength over an extension field".into(),
                ));
            }
        }
    }
    let mut prev = None;
    for n in 1..=cap + 2 {
        let c = colength_mod(&live, n as u32, budget)?;
        if prev == Some(c) {
            return Ok(Some(c));
        }
        prev = Some(c);
    }
    Ok(None)
}

/// Exponent vectors of total degree strictly below `bound`, graded order.
fn monomials_below(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, left: u32) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(current.clone());
            return;
        }
        for v in 0..=left {
            current[pos] = v;
            fill(out, current, pos + 1, left - v);
        }
    }
    for d in 0..bound {
        fill(&mut out, &mut current, 0, d);
    }
    out
}

/// `dim k[x] / (J + m^n)` for the ideal generated by the (nonzero) germs.
fn colength_mod(gens: &[&MultiPoly], n: u32, budget: &Budget) -> Result<usize> {
    let nvars = gens[0].nvars();
    let monos = monomials_below(nvars, n);
    let col: std::collections::HashMap<Vec<u32>, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();

    // One row per generator multiple that can still meet degrees below `n`.
    let mut pivots: std::collections::BTreeMap<usize, Vec<(usize, BigRational)>> =
        std::collections::BTreeMap::new();
    for g in gens {
        let val = g
            .mult_at_origin()
            .expect("zero generators were filtered out");
        if val >= n {
            continue;
        }
        for m in monomials_below(nvars, n - val) {
            let mdeg: u32 = m.iter().sum();
            let mut row: Vec<(usize, BigRational)> = Vec::new();
            for (e, c) in g.terms() {
                let deg: u32 = e.iter().sum();
                if deg + mdeg >= n {
                    continue;
                }
                let shifted: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                row.push((col[&shifted], c.as_rational().unwrap().clone()));
            }
            row.sort_by_key(|(i, _)| *i);
            reduce_and_insert(&mut pivots, row, budget)?;
        }
    }
    Ok(monos.len() - pivots.len())
}

/// Gaussian step: reduce the row against the recorded pivots and record it
/// as a fresh pivot if anything survives.
fn reduce_and_insert(
    pivots: &mut std::collections::BTreeMap<usize, Vec<(usize, BigRational)>>,
    mut row: Vec<(usize, BigRational)>,
    budget: &Budget,
) -> Result<()> {
    loop {
        let Some((lead, lead_c)) = row.first().map(|(i, c)| (*i, c.clone())) else {
            return Ok(());
        };
        budget.charge(1)?;
        let Some(pivot) = pivots.get(&lead) else {
            break;
        };
        // row -= (lead_c / pivot_lead) * pivot; the pivot is stored with a
        // unit leading coefficient.
        row = combine(&row, &lead_c, pivot);
    }
    let lead_c = row[0].1.clone();
    for (_, c) in &mut row {
        *c /= &lead_c;
    }
    pivots.insert(row[0].0, row);
    Ok(())
}

/// Sparse merge `a - t * b`, assuming both are sorted by column.
fn combine(
    a: &[(usize, BigRational)],
    t: &BigRational,
    b: &[(usize, BigRational)],
) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - t * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = -(t * vb);
                out.push((*cb, v));
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = -(t * vb);
                out.push((*cb, v));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}
