//! Small named test spaces used throughout the tests and by `tsp gen`.

use crate::error::{Error, Result};
use crate::space::TestSpace;

/// Names accepted by [`instance`]; `classical-N` takes any `N ≥ 1`.
pub const NAMES: &[&str] = &[
    "classical-N",
    "two-disjoint",
    "glued-pair",
    "triangle",
    "mo2",
    "stateless-grid",
];

/// A single test of `n` outcomes `x1 … xn`.
pub fn classical(n: usize) -> TestSpace {
    let ids: Vec<String> = match n {
        1..=26 => (b'a'..).take(n).map(|c| (c as char).to_string()).collect(),
        _ => (1..=n)
            .map(|i| format!("x{i:0w$}", w = n.to_string().len()))
            .collect(),
    };
    TestSpace::new(ids.clone(), [ids]).expect("classical space is well formed")
}

fn fixed(text: &str) -> TestSpace {
    TestSpace::parse(text).expect("corpus instance is well formed")
}

/// `{a,b}, {c,d}`.
pub fn two_disjoint() -> TestSpace {
    fixed("outcomes a b c d\ntest a b\ntest c d\n")
}

/// `{a,b,c}, {c,d,e}`.
pub fn glued_pair() -> TestSpace {
    fixed("outcomes a b c d e\ntest a b c\ntest c d e\n")
}

/// `{a,x,b}, {b,y,c}, {c,z,a}`.
pub fn triangle() -> TestSpace {
    fixed("outcomes a b c x y z\ntest a x b\ntest b y c\ntest c z a\n")
}

/// `{a,a'}, {b,b'}`, whose logic is MO2.
pub fn mo2() -> TestSpace {
    fixed("outcomes a a' b b'\ntest a a'\ntest b b'\n")
}

/// Rows and columns of a 2×3 grid. Rows cover `X` twice, columns three
/// times, so no state exists.
pub fn stateless_grid() -> TestSpace {
    fixed("outcomes a b c d e f\ntest a b c\ntest d e f\ntest a d\ntest b e\ntest c f\n")
}

pub fn instance(name: &str) -> Result<TestSpace> {
    if let Some(n) = name.strip_prefix("classical-") {
        return match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(classical(n)),
            _ => Err(Error::UnknownInstance(name.to_string())),
        };
    }
    match name {
        "two-disjoint" => Ok(two_disjoint()),
        "glued-pair" => Ok(glued_pair()),
        "triangle" => Ok(triangle()),
        "mo2" => Ok(mo2()),
        "stateless-grid" => Ok(stateless_grid()),
        _ => Err(Error::UnknownInstance(name.to_string())),
    }
}
