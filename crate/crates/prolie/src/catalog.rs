//! Builtin algebras, each with the verdicts it is expected to produce.

use prolie_core::presentation::Presentation;

use crate::dsl::{parse_presentation, DslError};

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    /// `(property, status)` pairs for the default windows.
    pub expected: &'static [(&'static str, &'static str)],
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        name: "m1",
        summary: "[e1, ei] = e(i+1); rank 2, maximal",
        source: "algebra m1
basis e(i) for i >= 1
weight e(1) = 1
weight e(i) = i - 1 for i >= 2
bracket [e(1), e(i)] = e(i + 1) for i >= 2
",
        expected: &[
            ("pro_nilpotent", "holds_to_depth"),
            ("residually_solvable", "holds_to_depth"),
            ("pro_solvable", "fails_at_depth"),
            ("rank", "2"),
        ],
    },
    Entry {
        name: "m2",
        summary: "[ei, e1] = e(i+1), [e2, ej] = e(j+2); graded by index",
        source: "algebra m2
basis e(i) for i >= 1
weight e(i) = i
bracket [e(i), e(1)] = e(i + 1) for i >= 2
bracket [e(2), e(j)] = e(j + 2) for j >= 3
",
        expected: &[
            ("pro_nilpotent", "holds_to_depth"),
            ("residually_solvable", "holds_to_depth"),
            ("pro_solvable", "fails_at_depth"),
        ],
    },
    Entry {
        name: "witt_pos",
        summary: "positive part of the Witt algebra, [ei, ej] = (j-i) e(i+j)",
        source: "algebra witt_pos
basis e(i) for i >= 1
weight e(i) = i
bracket [e(i), e(j)] = (j - i)*e(i + j)
",
        expected: &[
            ("pro_nilpotent", "holds_to_depth"),
            ("pro_solvable", "holds_to_depth"),
            ("rank", "1"),
        ],
    },
    Entry {
        name: "witt_nonneg",
        summary: "Witt algebra on indices i >= 0",
        source: "algebra witt_nonneg
basis e(i) for i >= 0
weight e(0) = 1
weight e(i) = i for i >= 1
bracket [e(i), e(j)] = (j - i)*e(i + j)
",
        expected: &[("residually_nilpotent", "fails_at_depth"), ("pro_solvable", "holds_to_depth")],
    },
    Entry {
        name: "W",
        summary: "W(s): [ei, ej] = (j-i) e(i+j+s), parameter s (default 0)",
        source: "algebra W
param s = 0
basis e(i) for i >= 1
weight e(i) = i + s
bracket [e(i), e(j)] = (j - i)*e(i + j + s)
",
        expected: &[("pro_nilpotent", "holds_to_depth"), ("rank", "1")],
    },
    Entry {
        name: "n1",
        summary: "positive part of the affine Kac-Moody algebra A1(1), coefficients by i - j mod 3",
        source: "algebra n1
basis e(i) for i >= 1
weight e(i) = i
bracket [e(i), e(j)] = e(i + j) for (i - j) % 3 == 1
bracket [e(i), e(j)] = -e(i + j) for (i - j) % 3 == 2
",
        expected: &[("pro_nilpotent", "holds_to_depth"), ("rank", "2")],
    },
    Entry {
        name: "char_nil",
        summary: "characteristically pro-nilpotent: [ei, e1] = e(i+1), [ei, e2] = e(i+2) + e(i+3)",
        source: "algebra char_nil
basis e(i) for i >= 1
weight e(1) = 1
weight e(i) = i - 1 for i >= 2
bracket [e(i), e(1)] = e(i + 1) for i >= 2
bracket [e(i), e(2)] = e(i + 2) + e(i + 3) for i >= 3
",
        expected: &[
            ("pro_nilpotent", "holds_to_depth"),
            ("characteristically_pro_nilpotent", "holds_to_depth"),
            ("rank", "0"),
        ],
    },
    Entry {
        name: "a_inf",
        summary: "[e0, ei] = e(i-1) for i >= 3; neither pro-solvable nor residually nilpotent",
        source: "algebra a_inf
basis e(i) for i >= 0
weight e(0) = 1
weight e(i) = i for i >= 1
bracket [e(0), e(i)] = e(i - 1) for i >= 3
",
        expected: &[("pro_solvable", "fails_at_depth"), ("residually_nilpotent", "fails_at_depth")],
    },
];

pub fn find(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Looks up `NAME` or `W(s)`; the parameter form sets `s`.
pub fn load(spec: &str) -> Option<Result<Presentation, DslError>> {
    let (name, arg) = match spec.split_once('(') {
        Some((n, rest)) => (n, Some(rest.strip_suffix(')')?.trim().parse::<i64>().ok()?)),
        None => (spec, None),
    };
    let entry = find(name)?;
    if arg.is_some() && !entry.source.contains("param s") {
        return None;
    }
    let parsed = parse_presentation(entry.source);
    Some(parsed.map(|mut p| {
        if let Some(s) = arg {
            p.set_param("s", s);
        }
        p
    }))
}
