use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{is_partition, Word};

/// A finite full binary tree. The left child of the node at address `w` sits
/// at `w1`, the right child at `w2`, so leaves read left to right are the
/// leaf addresses in lexicographic order.
///
/// JSON form is nested arrays: `[]` for a leaf, `[left, right]` for a node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Tree>", into = "Vec<Tree>")]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    /// The complete tree of the given depth.
    pub fn uniform(depth: usize) -> Tree {
        if depth == 0 {
            Tree::Leaf
        } else {
            Tree::node(Tree::uniform(depth - 1), Tree::uniform(depth - 1))
        }
    }

    /// The tree whose leaves are exactly `leaves`.
    pub fn from_leaves<'a, I: IntoIterator<Item = &'a Word>>(leaves: I) -> Result<Tree> {
        let mut ws: Vec<&Word> = leaves.into_iter().collect();
        if !is_partition(ws.iter().copied()) {
            return Err(Error::Domain("leaf words do not form a complete prefix-free family".into()));
        }
        ws.sort();
        Ok(Tree::build(&ws, 0))
    }

    fn build(ws: &[&Word], depth: usize) -> Tree {
        if ws.len() == 1 && ws[0].len() == depth {
            return Tree::Leaf;
        }
        let split = ws.partition_point(|w| w.letters()[depth] == 1);
        Tree::node(Tree::build(&ws[..split], depth + 1), Tree::build(&ws[split..], depth + 1))
    }

    /// Leaf addresses, left to right.
    pub fn leaves(&self) -> Vec<Word> {
        let mut out = Vec::new();
        self.collect_leaves(&mut Vec::new(), &mut out);
        out
    }

    fn collect_leaves(&self, prefix: &mut Vec<u8>, out: &mut Vec<Word>) {
        match self {
            Tree::Leaf => out.push(Word::from_letters(prefix.clone())),
            Tree::Node(l, r) => {
                prefix.push(1);
                l.collect_leaves(prefix, out);
                prefix.pop();
                prefix.push(2);
                r.collect_leaves(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }
}

impl TryFrom<Vec<Tree>> for Tree {
    type Error = String;

    fn try_from(children: Vec<Tree>) -> std::result::Result<Self, String> {
        match children.len() {
            0 => Ok(Tree::Leaf),
            2 => {
                let mut it = children.into_iter();
                Ok(Tree::node(it.next().unwrap(), it.next().unwrap()))
            }
            n => Err(format!("a tree node has 0 or 2 children, not {n}")),
        }
    }
}

impl From<Tree> for Vec<Tree> {
    fn from(t: Tree) -> Self {
        match t {
            Tree::Leaf => Vec::new(),
            Tree::Node(l, r) => vec![*l, *r],
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => f.write_str("[]"),
            Tree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaves_round_trip() {
        let ws: Vec<Word> = ["11", "12", "2"].iter().map(|s| s.parse().unwrap()).collect();
        let t = Tree::from_leaves(&ws).unwrap();
        assert_eq!(t, Tree::node(Tree::uniform(1), Tree::Leaf));
        assert_eq!(t.leaves(), ws);
        assert_eq!(Tree::from_leaves(&[Word::empty()]).unwrap(), Tree::Leaf);
        assert!(Tree::from_leaves(&ws[..2]).is_err());
    }

    #[test]
    fn nested_array_json() {
        let t = Tree::node(Tree::uniform(1), Tree::Leaf);
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(j, "[[[],[]],[]]");
        assert_eq!(serde_json::from_str::<Tree>(&j).unwrap(), t);
        assert!(serde_json::from_str::<Tree>("[[]]").is_err());
    }
}
