use num_traits::Float;
use serde::{Deserialize, Serialize};

/// A rooted, ordered, labeled tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tree<L> {
    pub label: L,
    pub children: Vec<Tree<L>>,
}

impl<L> Tree<L> {
    pub fn leaf(label: L) -> Self {
        Tree { label, children: Vec::new() }
    }

    pub fn node(label: L, children: Vec<Tree<L>>) -> Self {
        Tree { label, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Labels in preorder.
    pub fn preorder(&self) -> Vec<&L> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(&t.label);
            stack.extend(t.children.iter().rev());
        }
        out
    }
}

impl<L: std::fmt::Display> Tree<L> {
    /// Bracket notation: `label(child child ...)`.
    pub fn to_sexpr(&self) -> String {
        let mut s = self.label.to_string();
        if !self.children.is_empty() {
            s.push('(');
            let kids: Vec<_> = self.children.iter().map(Tree::to_sexpr).collect();
            s.push_str(&kids.join(" "));
            s.push(')');
        }
        s
    }
}

struct Postorder<'a, L> {
    labels: Vec<&'a L>,
    /// Leftmost leaf descendant of each node (postorder index).
    lml: Vec<usize>,
    keyroots: Vec<usize>,
}

fn postorder<L>(t: &Tree<L>) -> Postorder<'_, L> {
    fn walk<'a, L>(t: &'a Tree<L>, labels: &mut Vec<&'a L>, lml: &mut Vec<usize>) -> usize {
        let mut first = None;
        for c in &t.children {
            let l = walk(c, labels, lml);
            first.get_or_insert(l);
        }
        let me = labels.len();
        labels.push(&t.label);
        let leftmost = first.unwrap_or(me);
        lml.push(leftmost);
        leftmost
    }
    let mut labels = Vec::new();
    let mut lml = Vec::new();
    walk(t, &mut labels, &mut lml);
    // keyroots: highest node for each distinct leftmost leaf
    let n = labels.len();
    let mut seen = vec![false; n];
    let mut keyroots = Vec::new();
    for i in (0..n).rev() {
        if !seen[lml[i]] {
            seen[lml[i]] = true;
            keyroots.push(i);
        }
    }
    keyroots.sort_unstable();
    Postorder { labels, lml, keyroots }
}

/// Unit-cost ordered tree edit distance (Zhang–Shasha).
pub fn ast_edit_distance<L: PartialEq>(a: &Tree<L>, b: &Tree<L>) -> usize {
    let pa = postorder(a);
    let pb = postorder(b);
    let (n, m) = (pa.labels.len(), pb.labels.len());
    let mut td = vec![vec![0usize; m]; n];
    let mut fd = vec![vec![0usize; m + 1]; n + 1];
    for &i in &pa.keyroots {
        for &j in &pb.keyroots {
            let (li, lj) = (pa.lml[i], pb.lml[j]);
            let rows = i - li + 2;
            let cols = j - lj + 2;
            fd[0][0] = 0;
            for x in 1..rows {
                fd[x][0] = fd[x - 1][0] + 1;
            }
            for y in 1..cols {
                fd[0][y] = fd[0][y - 1] + 1;
            }
            for x in 1..rows {
                let ii = li + x - 1;
                for y in 1..cols {
                    let jj = lj + y - 1;
                    let del = fd[x - 1][y] + 1;
                    let ins = fd[x][y - 1] + 1;
                    if pa.lml[ii] == li && pb.lml[jj] == lj {
                        let rel = fd[x - 1][y - 1] + usize::from(pa.labels[ii] != pb.labels[jj]);
                        fd[x][y] = del.min(ins).min(rel);
                        td[ii][jj] = fd[x][y];
                    } else {
                        let px = pa.lml[ii] - li;
                        let py = pb.lml[jj] - lj;
                        fd[x][y] = del.min(ins).min(fd[px][py] + td[ii][jj]);
                    }
                }
            }
        }
    }
    td[n - 1][m - 1]
}

/// `1 - TED / max(|a|, |b|)`, clamped to `[0, 1]`.
pub fn aed_similarity<F: Float, L: PartialEq>(a: &Tree<L>, b: &Tree<L>) -> F {
    let d = F::from(ast_edit_distance(a, b)).unwrap();
    let size = F::from(a.size().max(b.size())).unwrap();
    (F::one() - d / size).max(F::zero()).min(F::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(label: &str, children: Vec<Tree<String>>) -> Tree<String> {
        Tree::node(label.to_string(), children)
    }
    fn l(label: &str) -> Tree<String> {
        Tree::leaf(label.to_string())
    }

    #[test]
    fn spot_values() {
        assert_eq!(ast_edit_distance(&l("a"), &l("a")), 0);
        assert_eq!(ast_edit_distance(&l("a"), &l("b")), 1);
        assert_eq!(aed_similarity::<f64, _>(&l("a"), &l("b")), 0.0);
        let x = t("f", vec![l("a"), l("b")]);
        assert_eq!(aed_similarity::<f64, _>(&x, &x), 1.0);
        // classic example: f(d(a c(b)) e) vs f(c(d(a b)) e) = 2
        let a = t("f", vec![t("d", vec![l("a"), t("c", vec![l("b")])]), l("e")]);
        let b = t("f", vec![t("c", vec![t("d", vec![l("a"), l("b")])]), l("e")]);
        assert_eq!(ast_edit_distance(&a, &b), 2);
        assert_eq!(ast_edit_distance(&l("a"), &t("a", vec![l("b"), l("c")])), 2);
    }

    #[test]
    fn sexpr_and_preorder() {
        let a = t("f", vec![t("d", vec![l("a")]), l("e")]);
        assert_eq!(a.to_sexpr(), "f(d(a) e)");
        assert_eq!(a.preorder(), ["f", "d", "a", "e"]);
        assert_eq!(a.size(), 4);
        assert_eq!(a.depth(), 3);
    }

    fn arb_tree() -> impl Strategy<Value = Tree<u8>> {
        let leaf = (0u8..3).prop_map(Tree::leaf);
        leaf.prop_recursive(3, 10, 3, |inner| {
            ((0u8..3), prop::collection::vec(inner, 0..3)).prop_map(|(l, c)| Tree::node(l, c))
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in arb_tree(), b in arb_tree()) {
            let d = ast_edit_distance(&a, &b);
            prop_assert_eq!(d, ast_edit_distance(&b, &a));
            prop_assert!(d <= a.size() + b.size());
            prop_assert!(d >= a.size().abs_diff(b.size()));
            let s: f64 = aed_similarity(&a, &b);
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert_eq!(d == 0, a == b);
        }

        #[test]
        fn triangle_inequality(a in arb_tree(), b in arb_tree(), c in arb_tree()) {
            prop_assert!(ast_edit_distance(&a, &c) <= ast_edit_distance(&a, &b) + ast_edit_distance(&b, &c));
        }
    }
}
