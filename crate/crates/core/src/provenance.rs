//! Bound values with the rule tree that produced them.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Upper,
    Lower,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub value: BigInt,
    pub rule: String,
    pub citation: Option<String>,
    pub children: Vec<BoundResult>,
    pub assumptions: Vec<String>,
    /// The instance this node bounds, e.g. `A_2(8,6;4)`.
    pub query: Option<String>,
}

impl BoundResult {
    pub fn leaf(value: impl Into<BigInt>, rule: &str) -> Self {
        BoundResult { value: value.into(), rule: String::from(rule), citation: None, children: Vec::new(), assumptions: Vec::new(), query: None }
    }

    pub fn with_children(value: impl Into<BigInt>, rule: &str, children: Vec<BoundResult>) -> Self {
        BoundResult { children, ..Self::leaf(value, rule) }
    }

    pub fn cite(mut self, citation: &str) -> Self {
        self.citation = Some(String::from(citation));
        self
    }

    pub fn at(mut self, query: String) -> Self {
        self.query = Some(query);
        self
    }

    pub fn assume(mut self, a: &str) -> Self {
        self.assumptions.push(String::from(a));
        self
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// All rule names in the tree, preorder.
    pub fn rules(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |n| out.push(n.rule.as_str()));
        out
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a BoundResult)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Indented multi-line rendering.
    pub fn explain(&self) -> String {
        let mut s = String::new();
        self.render(0, &mut s);
        s
    }

    fn render(&self, depth: usize, out: &mut String) {
        use core::fmt::Write;
        for _ in 0..depth {
            out.push_str("  ");
        }
        if let Some(q) = &self.query {
            let _ = write!(out, "{q}: ");
        }
        let _ = write!(out, "{} [{}]", self.value, self.rule);
        if let Some(c) = &self.citation {
            let _ = write!(out, " ({c})");
        }
        for a in &self.assumptions {
            let _ = write!(out, " assuming {a}");
        }
        out.push('\n');
        for c in &self.children {
            c.render(depth + 1, out);
        }
    }
}

impl fmt::Display for BoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.value, self.rule)
    }
}
