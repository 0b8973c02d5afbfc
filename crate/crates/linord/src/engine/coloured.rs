//! Exact decision of class-indexed convex embeddability between finite
//! coloured chains.
//!
//! An embedding of coloured chains must preserve colours; its image splits
//! into maximal runs of consecutive positions, and the pieces induced by
//! the runs form the coarsest valid convex partition. The instance holds
//! iff some colour-preserving embedding has at most `kmax` runs, where
//! `kmax` is the largest finite chain in the class (pieces can always be
//! split further, and finite chains in a downward-closed class come in all
//! smaller sizes).

use crate::term::ColouredFinite;

/// Minimal number of runs over all colour-preserving embeddings of `s`
/// into `t`, or `None` if there is no embedding at all.
pub fn min_runs(s: &[u32], t: &[u32]) -> Option<usize> {
    if s.is_empty() {
        return Some(0);
    }
    if s.len() > t.len() {
        return None;
    }
    // dp[i][j][c]: minimal runs embedding s[..i] into t[..j], c = 1 when
    // s[i-1] sits exactly at t[j-1].
    let (n, m) = (s.len(), t.len());
    const INF: usize = usize::MAX / 2;
    let mut dp = vec![[INF; 2]; n + 1];
    let mut next = vec![[INF; 2]; n + 1];
    dp[0][0] = 0;
    for j in 1..=m {
        for row in next.iter_mut() {
            *row = [INF; 2];
        }
        next[0][0] = 0;
        for i in 1..=n.min(j) {
            // s[i-1] not at t[j-1]: carry over, dropping adjacency
            let carry = dp[i][0].min(dp[i][1]);
            next[i][0] = carry;
            // s[i-1] at t[j-1]
            if s[i - 1] == t[j - 1] {
                let extend = dp[i - 1][1]; // previous matched at t[j-2]
                let fresh = dp[i - 1][0].min(dp[i - 1][1]).saturating_add(1);
                next[i][1] = extend.min(fresh).min(if i == 1 { 1 } else { INF });
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }
    let best = dp[n][0].min(dp[n][1]);
    if best >= INF {
        None
    } else {
        Some(best)
    }
}

/// Exact decision: is there a colour-preserving embedding of `s` into `t`
/// whose image splits into at most `kmax` consecutive runs? `kmax = None`
/// means the class contains arbitrarily large finite chains.
pub fn coloured_embeds(s: &ColouredFinite, t: &ColouredFinite, kmax: Option<u64>) -> bool {
    match min_runs(&s.colours, &t.colours) {
        None => false,
        Some(r) => match kmax {
            None => true,
            Some(k) => (r as u64) <= k,
        },
    }
}

/// One concrete witness embedding achieving at most `kmax` runs, as target
/// positions, together with the run count.
pub fn witness_embedding(s: &[u32], t: &[u32], kmax: Option<u64>) -> Option<(Vec<usize>, usize)> {
    fn rec(
        s: &[u32],
        t: &[u32],
        i: usize,
        j: usize,
        runs: usize,
        cap: usize,
        acc: &mut Vec<usize>,
    ) -> bool {
        if i == s.len() {
            return true;
        }
        if s.len() - i > t.len() - j {
            return false;
        }
        for jj in j..t.len() {
            if t[jj] == s[i] {
                let new_runs = if acc.last() == Some(&(jj.wrapping_sub(1))) { runs } else { runs + 1 };
                if new_runs <= cap {
                    acc.push(jj);
                    if rec(s, t, i + 1, jj + 1, new_runs, cap, acc) {
                        return true;
                    }
                    acc.pop();
                }
            }
        }
        false
    }
    let cap = kmax.map(|k| k as usize).unwrap_or(s.len());
    let mut acc = vec![];
    if rec(s, t, 0, 0, 0, cap, &mut acc) {
        let runs = count_runs(&acc);
        Some((acc, runs))
    } else {
        None
    }
}

pub fn count_runs(positions: &[usize]) -> usize {
    if positions.is_empty() {
        return 0;
    }
    1 + positions.windows(2).filter(|w| w[1] != w[0] + 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        // [a] into [b,a,b]: a single point is one run
        assert_eq!(min_runs(&[0], &[1, 0, 1]), Some(1));
        // [a,b] into [a,c,b]: positions 0 and 2, two runs
        assert_eq!(min_runs(&[0, 1], &[0, 2, 1]), Some(2));
        // no colour-preserving embedding at all
        assert_eq!(min_runs(&[3], &[0, 1]), None);
        // consecutive match is one run
        assert_eq!(min_runs(&[0, 1], &[2, 0, 1, 2]), Some(1));
    }

    #[test]
    fn witness_matches_min() {
        let s = [0u32, 1, 0];
        let t = [0u32, 2, 1, 0, 0];
        let m = min_runs(&s, &t).unwrap();
        let (pos, runs) = witness_embedding(&s, &t, Some(m as u64)).unwrap();
        assert_eq!(runs, m);
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in pos.iter().enumerate() {
            assert_eq!(t[p], s[i]);
        }
    }
}
