use std::fmt::Write;
use std::str::FromStr;

use super::{Diagram, Tree};
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Tikz,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(RenderFormat::Dot),
            "tikz" => Ok(RenderFormat::Tikz),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown format '{s}' (expected dot or tikz)"),
            }),
        }
    }
}

/// Draws `T+` on top and `T-` upside down below it, with the `p`-th leaf
/// of `T+` joined to leaf `τ(p)` of `T-` and labeled by its charge.
pub fn render(d: &Diagram, format: RenderFormat) -> String {
    match format {
        RenderFormat::Dot => dot(d),
        RenderFormat::Tikz => tikz(d),
    }
}

fn node_id(side: char, w: &Word) -> String {
    format!("{side}_{w}")
}

fn tree_edges(t: &Tree, prefix: &mut Vec<u8>, out: &mut Vec<(Word, Word)>) {
    if let Tree::Node(l, r) = t {
        let here = Word::from_letters(prefix.clone());
        for (letter, child) in [(1u8, l), (2u8, r)] {
            prefix.push(letter);
            out.push((here.clone(), Word::from_letters(prefix.clone())));
            tree_edges(child, prefix, out);
            prefix.pop();
        }
    }
}

fn dot(d: &Diagram) -> String {
    let mut s = String::new();
    s.push_str("digraph W {\n  node [shape=point];\n  edge [arrowhead=none];\n");
    for (side, tree, name) in [('p', d.tplus(), "T+"), ('m', d.tminus(), "T-")] {
        let _ = writeln!(s, "  subgraph cluster_{side} {{\n    label=\"{name}\";");
        let mut edges = Vec::new();
        tree_edges(tree, &mut Vec::new(), &mut edges);
        if edges.is_empty() {
            let _ = writeln!(s, "    {};", node_id(side, &Word::empty()));
        }
        for (parent, child) in edges {
            // T- hangs upside down, so its edges point towards the root
            let (a, b) = if side == 'p' { (parent, child) } else { (child, parent) };
            let _ = writeln!(s, "    {} -> {};", node_id(side, &a), node_id(side, &b));
        }
        s.push_str("  }\n");
    }
    let top = d.tplus().leaves();
    let bottom = d.tminus().leaves();
    for (p, a) in top.iter().enumerate() {
        let b = &bottom[d.tau()[p]];
        let _ = writeln!(
            s,
            "  {} -> {} [label=\"{}\", style=dashed];",
            node_id('p', a),
            node_id('m', b),
            d.charges()[p]
        );
    }
    s.push_str("}\n");
    s
}

/// Positions of all nodes: leaves at unit spacing, internal nodes centered
/// over their leaves and raised by their height.
fn layout(t: &Tree, prefix: &mut Vec<u8>, next_leaf: &mut usize, sign: f64, out: &mut Vec<(Word, f64, f64)>) -> (f64, f64) {
    let pos = match t {
        Tree::Leaf => {
            let x = *next_leaf as f64;
            *next_leaf += 1;
            (x, sign)
        }
        Tree::Node(l, r) => {
            prefix.push(1);
            let (xl, _) = layout(l, prefix, next_leaf, sign, out);
            prefix.pop();
            prefix.push(2);
            let (xr, _) = layout(r, prefix, next_leaf, sign, out);
            prefix.pop();
            ((xl + xr) / 2.0, sign * (1.0 + t.height() as f64))
        }
    };
    out.push((Word::from_letters(prefix.clone()), pos.0, pos.1));
    pos
}

fn tikz(d: &Diagram) -> String {
    let mut s = String::from("\\begin{tikzpicture}[x=1cm, y=0.8cm]\n");
    let mut coords: Vec<Vec<(Word, f64, f64)>> = Vec::new();
    for (tree, sign) in [(d.tplus(), 1.0), (d.tminus(), -1.0)] {
        let mut nodes = Vec::new();
        layout(tree, &mut Vec::new(), &mut 0, sign, &mut nodes);
        let at = |w: &Word| nodes.iter().find(|(x, _, _)| x == w).map(|&(_, x, y)| (x, y)).unwrap();
        let mut edges = Vec::new();
        tree_edges(tree, &mut Vec::new(), &mut edges);
        for (parent, child) in &edges {
            let (a, b) = (at(parent), at(child));
            let _ = writeln!(s, "  \\draw ({:.2},{:.2}) -- ({:.2},{:.2});", a.0, a.1, b.0, b.1);
        }
        coords.push(nodes);
    }
    let top = d.tplus().leaves();
    let bottom = d.tminus().leaves();
    let find = |nodes: &Vec<(Word, f64, f64)>, w: &Word| {
        nodes.iter().find(|(x, _, _)| x == w).map(|&(_, x, y)| (x, y)).unwrap()
    };
    for (p, a) in top.iter().enumerate() {
        let (x1, y1) = find(&coords[0], a);
        let (x2, y2) = find(&coords[1], &bottom[d.tau()[p]]);
        let _ = writeln!(
            s,
            "  \\draw[densely dashed] ({x1:.2},{y1:.2}) -- ({x2:.2},{y2:.2});\n  \\node[above, font=\\scriptsize] at ({x1:.2},{y1:.2}) {{${}$}};",
            d.charges()[p]
        );
    }
    for nodes in &coords {
        for (_, x, y) in nodes {
            let _ = writeln!(s, "  \\fill ({x:.2},{y:.2}) circle (1.5pt);");
        }
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn identity_is_two_joined_points() {
        let s = render(&Diagram::identity(), RenderFormat::Dot);
        assert!(s.contains("p_e;") && s.contains("m_e;"));
        assert!(s.contains("p_e -> m_e [label=\"0\""));
        let t = render(&Diagram::identity(), RenderFormat::Tikz);
        assert_eq!(t.matches("densely dashed").count(), 1);
    }

    #[test]
    fn three_leaf_example_topology() {
        let tplus = Tree::node(Tree::uniform(1), Tree::Leaf);
        let tminus = Tree::node(Tree::Leaf, Tree::uniform(1));
        let v = vec![BigInt::from(5), BigInt::from(6), BigInt::from(7)];
        let d = Diagram::new(tplus, tminus, vec![1, 0, 2], v).unwrap();
        let s = render(&d, RenderFormat::Dot);
        assert!(s.contains("p_11 -> m_21 [label=\"5\""));
        assert!(s.contains("p_12 -> m_1 [label=\"6\""));
        assert!(s.contains("p_2 -> m_22 [label=\"7\""));
        assert!(s.contains("m_21 -> m_2;"));
    }

    #[test]
    fn flip_crosses() {
        let f = Diagram::new(Tree::uniform(1), Tree::uniform(1), vec![1, 0], vec![0.into(), 0.into()]).unwrap();
        let s = render(&f, RenderFormat::Dot);
        assert!(s.contains("p_1 -> m_2") && s.contains("p_2 -> m_1"));
        let t = render(&f, RenderFormat::Tikz);
        assert!(t.contains("(0.00,1.00) -- (1.00,-1.00)") && t.contains("(1.00,1.00) -- (0.00,-1.00)"));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("svg".parse::<RenderFormat>(), Err(Error::Parse { .. })));
    }
}
