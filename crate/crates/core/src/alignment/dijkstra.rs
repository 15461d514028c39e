use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{check_scores, AlignError, AlignmentPath};
use crate::matrix::Matrix;
use crate::scalar::Real;

#[derive(PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path alignment that may skip phones.
///
/// Nodes are (frame, phone) cells with cost `-score`; from (t, j) the path
/// moves to (t + 1, j + k) for any k ≥ 0. The path runs from (0, 0) to
/// (T − 1, N − 1), so phones jumped over get duration zero. Costs are
/// shifted by the matrix maximum to stay non-negative, which changes every
/// path by the same constant.
pub fn dijkstra_align<T: Real>(scores: &Matrix<T>) -> Result<AlignmentPath<T>, AlignError> {
    check_scores(scores)?;
    let (frames, phones) = (scores.rows(), scores.cols());
    if frames == 1 && phones > 1 {
        // one frame cannot sit on both the first and the last phone
        return Err(AlignError::TooFewFrames { frames, phones });
    }
    let top = scores.as_slice().iter().map(|v| v.as_f64()).fold(f64::NEG_INFINITY, f64::max);
    let cost = |t: usize, j: usize| top - scores.get(t, j).as_f64();
    let index = |t: usize, j: usize| t * phones + j;

    let mut dist = vec![f64::INFINITY; frames * phones];
    let mut prev = vec![usize::MAX; frames * phones];
    let mut done = vec![false; frames * phones];
    let mut heap = BinaryHeap::new();
    dist[0] = cost(0, 0);
    heap.push(Entry { cost: dist[0], node: 0 });
    let goal = index(frames - 1, phones - 1);

    while let Some(Entry { cost: d, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == goal {
            break;
        }
        let (t, j) = (node / phones, node % phones);
        if t + 1 == frames {
            continue;
        }
        for k in j..phones {
            let next = index(t + 1, k);
            let nd = d + cost(t + 1, k);
            if nd < dist[next] {
                dist[next] = nd;
                prev[next] = node;
                heap.push(Entry { cost: nd, node: next });
            }
        }
    }

    let mut durations = vec![0usize; phones];
    let mut score = T::zero();
    let mut node = goal;
    loop {
        let j = node % phones;
        durations[j] += 1;
        score += scores.get(node / phones, j);
        if node == 0 {
            break;
        }
        node = prev[node];
    }
    Ok(AlignmentPath { durations, score })
}

#[cfg(test)]
mod tests {
    use super::super::{mas, path_score};
    use super::*;
    use proptest::prelude::*;

    /// Every monotonic path from phone 0 to phone N-1 over T frames,
    /// given as per-phone frame counts (zeros allowed in the interior).
    fn all_skip_paths(frames: usize, phones: usize) -> Vec<Vec<usize>> {
        fn rec(t: usize, j: usize, frames: usize, phones: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if t == frames {
                if j == phones - 1 {
                    out.push(cur.clone());
                }
                return;
            }
            for k in j..phones {
                if t == 0 && k != 0 {
                    break;
                }
                cur[k] += 1;
                rec(t + 1, k, frames, phones, cur, out);
                cur[k] -= 1;
            }
        }
        let mut out = Vec::new();
        rec(0, 0, frames, phones, &mut vec![0; phones], &mut out);
        out
    }

    #[test]
    fn skips_a_dead_phone() {
        let l = |p: f64| p.ln();
        let s = Matrix::from_rows(&[
            [l(0.9), l(1e-9), l(0.1)],
            [l(0.9), l(1e-9), l(0.1)],
            [l(0.5), l(1e-9), l(0.5)],
            [l(0.1), l(1e-9), l(0.9)],
        ])
        .unwrap();
        let d = dijkstra_align(&s).unwrap();
        // brute force over every skip-permitting path
        let best = all_skip_paths(4, 3)
            .into_iter()
            .max_by(|a, b| path_score(&s, a).total_cmp(&path_score(&s, b)))
            .unwrap();
        assert_eq!(d.durations[1], 0);
        assert!((d.score - path_score(&s, &best)).abs() < 1e-12);
        assert!(mas(&s).unwrap().durations.iter().all(|&x| x >= 1));
    }

    #[test]
    fn single_cell() {
        let s = Matrix::filled(1, 1, -0.3f64);
        assert_eq!(dijkstra_align(&s).unwrap().durations, vec![1]);
        assert_eq!(mas(&s).unwrap().durations, vec![1]);
    }

    #[test]
    fn one_frame_many_phones_is_rejected() {
        assert!(dijkstra_align(&Matrix::filled(1, 3, 0.0f64)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn optimal_over_skip_paths(t in 2usize..8, n in 1usize..5, seed in prop::collection::vec(-10.0f64..0.0, 40)) {
            let s = Matrix::from_vec(t, n, seed[..t * n].to_vec()).unwrap();
            let d = dijkstra_align(&s).unwrap();
            let best = all_skip_paths(t, n).iter().map(|p| path_score(&s, p)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((d.score - best).abs() < 1e-9);
            prop_assert_eq!(d.frames(), t);
            prop_assert!(d.durations[0] >= 1 && d.durations[n - 1] >= 1);
            if t >= n {
                prop_assert!(d.score >= mas(&s).unwrap().score - 1e-9);
            }
        }
    }
}
