//! Certificates built from the pushout-of-posets construction.
//!
//! Everything lives inside one ambient poset `X`. For `P = Q ∩ R` an up-set of
//! `Q`, the elements of `Q - P` are attached one at a time from the top down.
//! Attaching `q` adds the chains `q < c` with `c` a chain above `q` in the
//! part built so far that is not contained in `Q`. Those chains are paired by
//! toggling `a*(r)`, the largest element of `Q` below the first element `r` of
//! `c` outside `Q`; the chain containing `a*(r)` is the top of an inner horn
//! whose free face is the other member of the pair.

use std::sync::Arc;

use super::{AnodyneCertificate, CertError, HornMove};
use crate::nerve::SubNerve;
use crate::poset::Poset;

fn hypothesis(name: &str, witness: String) -> CertError {
    CertError::HypothesisFailed {
        name: name.to_string(),
        witness,
    }
}

fn mask(x: &Poset, members: &[usize]) -> Vec<bool> {
    let mut m = vec![false; x.len()];
    for &i in members {
        m[i] = true;
    }
    m
}

fn union_nerve(x: &Arc<Poset>, parts: &[&[usize]]) -> SubNerve {
    let mut out = SubNerve::empty(x.clone());
    for part in parts {
        for c in SubNerve::nerve_of_members(x.clone(), part).chains() {
            out.insert(c.clone());
        }
    }
    out
}

/// Checks the hypotheses for `N(Q) ∪ N(R) ⊆ N(Q ∪ R)` in the up-set orientation.
fn check_pushout_hypotheses(x: &Poset, in_p: &[bool], in_q: &[bool], in_r: &[bool]) -> Result<(), CertError> {
    let n = x.len();
    let name = |i: usize| x.name(i).to_string();
    for i in 0..n {
        if in_p[i] && !(in_q[i] && in_r[i]) {
            return Err(hypothesis("inclusion", format!("{} is not in both Q and R", name(i))));
        }
        if in_q[i] && in_r[i] && !in_p[i] {
            return Err(hypothesis("intersection", format!("{} lies in Q ∩ R but not in P", name(i))));
        }
    }
    // Order on Q ∪ R must be the pushout order.
    for q in (0..n).filter(|&i| in_q[i] && !in_p[i]) {
        for r in (0..n).filter(|&i| in_r[i] && !in_p[i]) {
            let through = |lo: usize, hi: usize| (0..n).any(|p| in_p[p] && x.leq(lo, p) && x.leq(p, hi));
            if x.leq(q, r) != through(q, r) || x.leq(r, q) != through(r, q) {
                return Err(hypothesis(
                    "pushout-order",
                    format!("the order between {} and {} does not factor through P", name(q), name(r)),
                ));
            }
        }
    }
    // P is an up-set of Q.
    for p in (0..n).filter(|&i| in_p[i]) {
        if let Some(y) = x.up(p).ones().find(|&y| in_q[y] && !in_p[y]) {
            return Err(hypothesis(
                "up-set",
                format!("{} <= {} with {} outside P", name(p), name(y), name(y)),
            ));
        }
    }
    // Q has pushouts (joins of pairs under a common element) and Q ∪ R keeps them.
    let in_s: Vec<bool> = (0..n).map(|i| in_q[i] || in_r[i]).collect();
    let least_upper = |b: usize, c: usize, within: &[bool]| -> Option<usize> {
        let upper: Vec<usize> = (0..n).filter(|&z| within[z] && x.leq(b, z) && x.leq(c, z)).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&z| x.leq(m, z)))
    };
    for b in (0..n).filter(|&i| in_q[i]) {
        for c in (b + 1..n).filter(|&i| in_q[i]) {
            let spanned = (0..n).any(|a| in_q[a] && x.leq(a, b) && x.leq(a, c));
            if !spanned {
                continue;
            }
            let in_q_join = least_upper(b, c, in_q);
            if in_q_join.is_none() || in_q_join != least_upper(b, c, &in_s) {
                return Err(hypothesis(
                    "pushouts",
                    format!(
                        "the span under {} and {} has no pushout in Q preserved in Q ∪ R",
                        name(b),
                        name(c)
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Moves for `N(Q) ∪ N(R) ⊆ N(Q ∪ R)` in the up-set orientation.
fn pushout_moves(x: &Poset, in_p: &[bool], in_q: &[bool], in_r: &[bool]) -> Result<Vec<HornMove>, CertError> {
    check_pushout_hypotheses(x, in_p, in_q, in_r)?;
    let n = x.len();
    let order = x.linear_extension();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut built: Vec<bool> = in_r.to_vec();
    let mut moves = Vec::new();
    for &q in order.iter().rev().filter(|&&i| in_q[i] && !in_p[i]) {
        let above: Vec<usize> = order.iter().copied().filter(|&t| built[t] && x.lt(q, t)).collect();
        // a*(r) for every r above q that is outside Q.
        let mut best_below = vec![None; n];
        for &r in above.iter().filter(|&&t| !in_q[t]) {
            let below: Vec<usize> = above.iter().copied().filter(|&a| in_q[a] && x.lt(a, r)).collect();
            let best = below.iter().copied().find(|&m| below.iter().all(|&a| x.leq(a, m)));
            match best {
                Some(m) => best_below[r] = Some(m),
                None => {
                    return Err(hypothesis(
                        "pushouts",
                        format!(
                            "the elements of Q between {} and {} have no largest member",
                            x.name(q),
                            x.name(r)
                        ),
                    ))
                }
            }
        }
        let mut tops: Vec<(usize, std::cmp::Reverse<usize>, Vec<usize>, usize)> = Vec::new();
        let mut chain = vec![q];
        collect_tops(x, &above, in_q, &best_below, &position, &mut chain, &mut tops);
        tops.sort();
        moves.extend(tops.into_iter().map(|(_, _, c, k)| HornMove::new(c, k)));
        built[q] = true;
    }
    Ok(moves)
}

/// Walks the chains `q < c_1 < ...` inside `above`, recording every chain that is
/// the top of its pair, keyed by (length, first non-Q element descending, chain).
fn collect_tops(
    x: &Poset,
    above: &[usize],
    in_q: &[bool],
    best_below: &[Option<usize>],
    position: &[usize],
    chain: &mut Vec<usize>,
    tops: &mut Vec<(usize, std::cmp::Reverse<usize>, Vec<usize>, usize)>,
) {
    if let Some(j) = chain.iter().skip(1).position(|&v| !in_q[v]).map(|j| j + 1) {
        let r = chain[j];
        if Some(chain[j - 1]) == best_below[r] {
            tops.push((chain.len(), std::cmp::Reverse(position[r]), chain.clone(), j - 1));
        }
    }
    let last = *chain.last().expect("chains are non-empty");
    for &next in above {
        if x.lt(last, next) {
            chain.push(next);
            collect_tops(x, above, in_q, best_below, position, chain, tops);
            chain.pop();
        }
    }
}

fn certificate(x: &Arc<Poset>, q: &[usize], r: &[usize], moves: Vec<HornMove>) -> Result<AnodyneCertificate, CertError> {
    let s: Vec<usize> = {
        let mut s: Vec<usize> = q.iter().chain(r).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let cert = AnodyneCertificate {
        start: union_nerve(x, &[q, r]),
        target: SubNerve::nerve_of_members(x.clone(), &s),
        moves,
    };
    cert.validate()?;
    Ok(cert)
}

/// Certificate for `N(Q) ∪ N(R) ⊆ N(Q ∪ R)` inside `ambient`, where `P = Q ∩ R`
/// is an up-set of `Q`, `Q` has pushouts preserved in `Q ∪ R`, and the order on
/// `Q ∪ R` is the pushout order over `P`.
pub fn certify_poset_pushout(
    ambient: &Arc<Poset>,
    p: &[usize],
    q: &[usize],
    r: &[usize],
) -> Result<AnodyneCertificate, CertError> {
    let moves = pushout_moves(ambient, &mask(ambient, p), &mask(ambient, q), &mask(ambient, r))?;
    certificate(ambient, q, r, moves)
}

/// The same statement with the order reversed: `P` a down-set of `Q`, and `Q`
/// has pullbacks preserved in `Q ∪ R`. Moves are built in the opposite poset
/// and read backwards.
pub fn certify_poset_pushout_dual(
    ambient: &Arc<Poset>,
    p: &[usize],
    q: &[usize],
    r: &[usize],
) -> Result<AnodyneCertificate, CertError> {
    let op = ambient.opposite();
    let moves = pushout_moves(&op, &mask(ambient, p), &mask(ambient, q), &mask(ambient, r))?
        .into_iter()
        .map(|mv| {
            let m = mv.dim();
            let mut chain = mv.chain;
            chain.reverse();
            HornMove::new(chain, m - mv.k)
        })
        .collect();
    certificate(ambient, q, r, moves)
}

/// Certificate for `∪_j N(P_{p_j//q_j}) ⊆ N(∪_j P_{p_j//q_j})`, one pushout step per interval.
pub fn certify_interval_union(ambient: &Arc<Poset>, p_list: &[usize], q_list: &[usize]) -> Result<AnodyneCertificate, CertError> {
    let x = ambient.as_ref();
    let name = |i: usize| x.name(i).to_string();
    if p_list.is_empty() || p_list.len() != q_list.len() {
        return Err(hypothesis(
            "bounds",
            format!("{} lower and {} upper bounds", p_list.len(), q_list.len()),
        ));
    }
    for &v in p_list.iter().chain(q_list) {
        x.check_index(v).map_err(|e| hypothesis("bounds", e.to_string()))?;
    }
    for j in 1..p_list.len() {
        if !x.leq(p_list[j - 1], p_list[j]) || !x.leq(q_list[j - 1], q_list[j]) {
            return Err(hypothesis("monotone", format!("bounds at position {j} decrease")));
        }
        if !x.leq(p_list[j], q_list[j - 1]) {
            return Err(hypothesis(
                "overlap",
                format!("{} is not below {}", name(p_list[j]), name(q_list[j - 1])),
            ));
        }
    }
    let intervals: Vec<Vec<usize>> = p_list.iter().zip(q_list).map(|(&p, &q)| x.interval_members(p, q)).collect();
    let parts: Vec<&[usize]> = intervals.iter().map(Vec::as_slice).collect();
    let start = union_nerve(ambient, &parts);
    let mut covered = mask(x, &intervals[0]);
    let mut moves = Vec::new();
    for piece in &intervals[1..] {
        let in_r = mask(x, piece);
        let in_p: Vec<bool> = (0..x.len()).map(|i| covered[i] && in_r[i]).collect();
        moves.extend(pushout_moves(x, &in_p, &covered, &in_r)?);
        for &i in piece {
            covered[i] = true;
        }
    }
    let all: Vec<usize> = (0..x.len()).filter(|&i| covered[i]).collect();
    let cert = AnodyneCertificate {
        start,
        target: SubNerve::nerve_of_members(ambient.clone(), &all),
        moves,
    };
    cert.validate()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pushout_needs_no_moves() {
        let x = Arc::new(Poset::chain(2));
        let all = [0, 1, 2];
        let cert = certify_poset_pushout(&x, &all, &all, &all).unwrap();
        assert!(cert.is_empty());
    }

    #[test]
    fn two_simplices_sharing_an_edge() {
        // Q = {0,1} ∪ ..., R = {1,2}, P = {1}: Δ^1 ∪_{Δ^0} Δ^1 ⊆ Δ^2.
        let x = Arc::new(Poset::chain(2));
        let cert = certify_poset_pushout(&x, &[1], &[0, 1], &[1, 2]).unwrap();
        assert_eq!(cert.moves, vec![HornMove::new(vec![0, 1, 2], 1)]);
    }

    #[test]
    fn up_set_hypothesis_is_checked() {
        let x = Arc::new(Poset::new(&["a", "b", "c"], &[("a", "b")]).unwrap());
        let err = certify_poset_pushout(&x, &[0], &[0, 1], &[0, 2]).unwrap_err();
        match err {
            CertError::HypothesisFailed { name, .. } => assert_eq!(name, "up-set"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_interval_is_empty() {
        let x = Arc::new(Poset::grid(1, 1));
        let cert = certify_interval_union(&x, &[0], &[3]).unwrap();
        assert!(cert.is_empty());
    }
}
