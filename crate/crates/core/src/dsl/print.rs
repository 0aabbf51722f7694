use std::fmt::Write;

use num_traits::{One, Signed};

use crate::jetcalc::BigradedForm;
use crate::linop::LinDiffOp;
use crate::symexpr::{BundleSpec, Expr, Factor, Monomial, MultiIndex, Rational};

use super::Model;

fn print_monomial(bundle: &BundleSpec, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .factors()
        .iter()
        .map(|(f, e)| {
            let base = match f {
                Factor::Var(s) => bundle.symbol_name(s),
                Factor::Func(k, arg) => format!("{}({})", k.name(), print_expr(bundle, arg)),
            };
            if *e > 1 {
                format!("{base}^{e}")
            } else {
                base
            }
        })
        .collect();
    parts.join("*")
}

/// Canonical text of an expression: terms in decreasing monomial order,
/// jet variables in bracket form. The output re-parses to the same value.
pub fn print_expr(bundle: &BundleSpec, e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            write!(out, "{a}").unwrap();
        } else if a.is_one() {
            out.push_str(&print_monomial(bundle, m));
        } else {
            write!(out, "{a}*{}", print_monomial(bundle, m)).unwrap();
        }
    }
    out
}

/// Canonical text of a form: `(c)*[dV(u[t]), dH(x)] + ...`, or `0`.
pub fn print_form(bundle: &BundleSpec, f: &BigradedForm) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = f
        .terms()
        .map(|(b, c)| {
            let gens: Vec<String> = b
                .contact()
                .iter()
                .map(|v| format!("dV({})", bundle.jet_name(v)))
                .chain(
                    b.horizontal()
                        .iter()
                        .map(|&i| format!("dH({})", bundle.independent()[i])),
                )
                .collect();
            format!("({})*[{}]", print_expr(bundle, c), gens.join(", "))
        })
        .collect();
    terms.join(" + ")
}

pub(crate) fn d_marker(bundle: &BundleSpec, idx: &MultiIndex) -> String {
    let names: Vec<&str> = idx
        .positions()
        .into_iter()
        .map(|i| bundle.independent()[i].as_str())
        .collect();
    format!("D[{}]", names.join(","))
}

/// One operator entry `sum c_I D_I` in the model-file syntax.
pub fn print_operator_entry(bundle: &BundleSpec, op: &LinDiffOp, row: usize, col: usize) -> String {
    let entry = op.entry(row, col);
    if entry.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (idx, c)) in entry.iter().rev().enumerate() {
        let (neg, body) = entry_term(bundle, idx, c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn entry_term(bundle: &BundleSpec, idx: &MultiIndex, c: &Expr) -> (bool, String) {
    if idx.is_empty() {
        return match c.as_constant() {
            Some(r) if r.is_negative() => (true, print_expr(bundle, &-c)),
            Some(_) => (false, print_expr(bundle, c)),
            None => (false, format!("({})", print_expr(bundle, c))),
        };
    }
    let d = d_marker(bundle, idx);
    if c.len() == 1 {
        let (m, r) = c.terms().next().expect("one term");
        let neg = r.is_negative();
        let a: Rational = r.abs();
        let body = match (m.is_one(), a.is_one()) {
            (true, true) => d,
            (true, false) => format!("{a}*{d}"),
            (false, true) => format!("{}*{d}", print_monomial(bundle, m)),
            (false, false) => format!("{a}*{}*{d}", print_monomial(bundle, m)),
        };
        return (neg, body);
    }
    (false, format!("({})*{d}", print_expr(bundle, c)))
}

/// An operator as rows of entries, one row per line.
pub fn print_operator(bundle: &BundleSpec, op: &LinDiffOp) -> String {
    let rows: Vec<String> = (0..op.rows())
        .map(|r| {
            let entries: Vec<String> = (0..op.cols())
                .map(|c| print_operator_entry(bundle, op, r, c))
                .collect();
            entries.join(", ")
        })
        .collect();
    rows.join(";\n")
}

/// Canonical text of a model; `parse_model` of the output reproduces it.
pub fn print_model(model: &Model) -> String {
    let b = &model.bundle;
    let mut out = String::from("version 1;\n");
    writeln!(out, "model \"{}\" {{", model.name).unwrap();
    writeln!(out, "  independent {};", b.independent().join(" ")).unwrap();
    writeln!(out, "  dependent {};", b.dependent().join(" ")).unwrap();
    if !b.constants().is_empty() {
        writeln!(out, "  constant {};", b.constants().join(" ")).unwrap();
    }
    for (name, l) in &model.lagrangians {
        writeln!(out, "  lagrangian {name} = {};", print_expr(b, l.density())).unwrap();
    }
    for (name, chi) in &model.symmetries {
        writeln!(out, "  symmetry {name} {{").unwrap();
        for (a, c) in chi.components().iter().enumerate() {
            writeln!(out, "    chi[{}] = {};", b.dependent()[a], print_expr(b, c)).unwrap();
        }
        out.push_str("  }\n");
    }
    for (name, decl) in &model.operators {
        writeln!(out, "  operator {name}({}) {{", decl.params.join(" ")).unwrap();
        for r in 0..decl.op.rows() {
            let entries: Vec<String> = (0..decl.op.cols())
                .map(|c| print_operator_entry(b, &decl.op, r, c))
                .collect();
            writeln!(out, "    {};", entries.join(", ")).unwrap();
        }
        out.push_str("  }\n");
    }
    if let Some(solved) = &model.solved {
        out.push_str("  solved {\n");
        for (v, r) in solved {
            writeln!(out, "    {} = {};", b.jet_name(v), print_expr(b, r)).unwrap();
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
