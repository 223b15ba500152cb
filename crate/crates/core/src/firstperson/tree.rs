use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Column-major training matrix with 0/1 class labels.
pub(crate) struct Dataset {
    pub columns: Vec<Vec<f64>>,
    /// Columns holding only 0 and 1 take a counting fast path.
    pub binary: Vec<bool>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn new(columns: Vec<Vec<f64>>, labels: Vec<u8>) -> Self {
        let binary = columns.iter().map(|c| c.iter().all(|&v| v == 0.0 || v == 1.0)).collect();
        Dataset { columns, binary, labels }
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn row_value(&self, i: usize) -> impl Fn(usize) -> f64 + '_ {
        move |j| self.columns[j][i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Node {
    /// Bootstrap class counts `[other, first_person]` reaching the leaf.
    Leaf { counts: [u32; 2] },
    /// `x[feature] <= threshold` goes left.
    Split { feature: u32, threshold: f64, left: u32, right: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    /// Majority class of the reached leaf; ties go to class 0.
    pub fn predict(&self, value: impl Fn(usize) -> f64) -> u8 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return u8::from(counts[1] > counts[0]),
                Node::Split { feature, threshold, left, right } => {
                    at = if value(*feature as usize) <= *threshold { *left as usize } else { *right as usize };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left as usize).max(go(nodes, *right as usize)),
            }
        }
        go(&self.nodes, 0)
    }
}

pub(crate) struct TreeParams {
    pub max_features: usize,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

fn gini_weighted(c: [u32; 2]) -> f64 {
    // n * gini = n - (a^2 + b^2) / n
    let n = f64::from(c[0] + c[1]);
    if n == 0.0 {
        return 0.0;
    }
    n - (f64::from(c[0]).powi(2) + f64::from(c[1]).powi(2)) / n
}

struct Candidate {
    score: f64,
    feature: usize,
    threshold: f64,
}

/// Best split of `samples` on feature `j`, or None if `j` is constant.
fn best_split_on(data: &Dataset, samples: &[u32], j: usize, min_leaf: usize) -> Option<Candidate> {
    let col = &data.columns[j];
    if data.binary[j] {
        let mut left = [0u32; 2];
        let mut right = [0u32; 2];
        for &s in samples {
            let side = if col[s as usize] == 0.0 { &mut left } else { &mut right };
            side[data.labels[s as usize] as usize] += 1;
        }
        let (nl, nr) = ((left[0] + left[1]) as usize, (right[0] + right[1]) as usize);
        if nl == 0 || nr == 0 {
            return None;
        }
        if nl < min_leaf || nr < min_leaf {
            return Some(Candidate { score: f64::INFINITY, feature: j, threshold: 0.5 });
        }
        return Some(Candidate { score: gini_weighted(left) + gini_weighted(right), feature: j, threshold: 0.5 });
    }

    let mut pairs: Vec<(f64, u8)> = samples.iter().map(|&s| (col[s as usize], data.labels[s as usize])).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs[0].0 == pairs[pairs.len() - 1].0 {
        return None;
    }
    let mut total = [0u32; 2];
    for p in &pairs {
        total[p.1 as usize] += 1;
    }
    let mut left = [0u32; 2];
    let mut best = Candidate { score: f64::INFINITY, feature: j, threshold: f64::NAN };
    for i in 0..pairs.len() - 1 {
        left[pairs[i].1 as usize] += 1;
        let (a, b) = (pairs[i].0, pairs[i + 1].0);
        if a == b || i + 1 < min_leaf || pairs.len() - i - 1 < min_leaf {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let score = gini_weighted(left) + gini_weighted(right);
        if score < best.score {
            let mid = a + (b - a) / 2.0;
            best = Candidate { score, feature: j, threshold: if mid < b { mid } else { a } };
        }
    }
    if best.threshold.is_nan() {
        // Non-constant but no split satisfies the leaf-size limit.
        best.threshold = pairs[0].0;
    }
    Some(best)
}

/// Grows one tree depth-first. Features are drawn without replacement until
/// `max_features` non-constant ones have been evaluated.
pub(crate) fn grow_tree(data: &Dataset, samples: Vec<u32>, params: &TreeParams, rng: &mut ChaCha8Rng) -> DecisionTree {
    let d = data.n_features();
    let mut nodes: Vec<Node> = vec![Node::Leaf { counts: [0, 0] }];
    let mut stack: Vec<(usize, Vec<u32>, usize)> = vec![(0, samples, 0)];
    let mut order: Vec<usize> = (0..d).collect();

    while let Some((id, samples, depth)) = stack.pop() {
        let mut counts = [0u32; 2];
        for &s in &samples {
            counts[data.labels[s as usize] as usize] += 1;
        }
        let pure = counts[0] == 0 || counts[1] == 0;
        let depth_capped = params.max_depth.is_some_and(|m| depth >= m);
        if pure || depth_capped || samples.len() < 2 * params.min_leaf {
            nodes[id] = Node::Leaf { counts };
            continue;
        }

        let mut best: Option<Candidate> = None;
        let mut visited = 0;
        let mut drawn = 0;
        while visited < params.max_features && drawn < d {
            let pick = rng.gen_range(drawn..d);
            order.swap(drawn, pick);
            let j = order[drawn];
            drawn += 1;
            if let Some(c) = best_split_on(data, &samples, j, params.min_leaf) {
                visited += 1;
                if best.as_ref().is_none_or(|b| c.score < b.score) {
                    best = Some(c);
                }
            }
        }

        match best.filter(|b| b.score.is_finite()) {
            None => nodes[id] = Node::Leaf { counts },
            Some(b) => {
                let col = &data.columns[b.feature];
                let (l, r): (Vec<u32>, Vec<u32>) = samples.iter().partition(|&&s| col[s as usize] <= b.threshold);
                let (li, ri) = (nodes.len(), nodes.len() + 1);
                nodes.push(Node::Leaf { counts: [0, 0] });
                nodes.push(Node::Leaf { counts: [0, 0] });
                nodes[id] = Node::Split { feature: b.feature as u32, threshold: b.threshold, left: li as u32, right: ri as u32 };
                stack.push((ri, r, depth + 1));
                stack.push((li, l, depth + 1));
            }
        }
    }
    DecisionTree { nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn params(d: usize) -> TreeParams {
        TreeParams { max_features: d, min_leaf: 1, max_depth: None }
    }

    #[test]
    fn two_point_split_separates() {
        let data = Dataset::new(vec![vec![3.0, 7.0]], vec![0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = grow_tree(&data, vec![0, 1], &params(1), &mut rng);
        match &t.nodes[0] {
            Node::Split { threshold, .. } => assert!(*threshold >= 3.0 && *threshold < 7.0),
            other => panic!("expected split, got {other:?}"),
        }
        assert_eq!(t.predict(|_| 3.0), 0);
        assert_eq!(t.predict(|_| 7.0), 1);
    }

    #[test]
    fn picks_the_informative_feature() {
        // Feature 1 separates perfectly; feature 0 is noise.
        let f0 = vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let f1 = vec![0.1, 0.2, 0.3, 5.0, 6.0, 7.0];
        let data = Dataset::new(vec![f0, f1], vec![0, 0, 0, 1, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = grow_tree(&data, (0..6).collect(), &params(2), &mut rng);
        assert_eq!(t.depth(), 1);
        for i in 0..6 {
            assert_eq!(t.predict(data.row_value(i)), data.labels[i]);
        }
    }

    #[test]
    fn constant_features_make_a_leaf() {
        let data = Dataset::new(vec![vec![1.0; 4]], vec![0, 1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = grow_tree(&data, (0..4).collect(), &params(1), &mut rng);
        assert_eq!(t.nodes, vec![Node::Leaf { counts: [2, 2] }]);
        assert_eq!(t.predict(|_| 1.0), 0);
    }

    #[test]
    fn training_points_fit_exactly_without_duplicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cols: Vec<Vec<f64>> = (0..3).map(|_| (0..40).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
        let labels: Vec<u8> = (0..40).map(|_| rng.gen_range(0..2)).collect();
        let data = Dataset::new(cols, labels);
        let t = grow_tree(&data, (0..40).collect(), &params(2), &mut rng);
        for i in 0..40 {
            assert_eq!(t.predict(data.row_value(i)), data.labels[i]);
        }
    }
}
