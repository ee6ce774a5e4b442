//! Canonical text for a [`SpecFile`]; parsing it back gives an equal spec.

use std::fmt::Write;

use csl_core::algebra::Var;
use csl_core::exterior::{DiffForm, GenKind, Mode, VarKind};

use super::{rational_text, SpecFile};

pub fn print_spec(spec: &SpecFile) -> String {
    let chart = &spec.chart;
    let mut out = String::new();
    let sphere = if matches!(chart.mode(), Mode::Sphere(_)) { " sphere" } else { "" };
    writeln!(out, "chart {}{sphere}", chart.name()).unwrap();
    let vars = chart.vars();
    let mut i = 0;
    while i < vars.len() {
        let kind = vars[i].kind;
        let mut j = i;
        while j < vars.len() && vars[j].kind == kind {
            j += 1;
        }
        let keyword = match kind {
            VarKind::Coordinate => "vars",
            VarKind::Param => "params",
            VarKind::Func => "funcs",
        };
        let names: Vec<&str> = vars[i..j].iter().map(|d| d.name.as_str()).collect();
        writeln!(out, "{keyword} {}", names.join(" ")).unwrap();
        i = j;
    }
    for g in chart.relations().groups() {
        let terms: Vec<String> = g.vars().iter().map(|v| format!("{}^2", chart.var_name(*v))).collect();
        writeln!(out, "relation {} = 1", terms.join(" + ")).unwrap();
    }
    for (i, d) in vars.iter().enumerate() {
        if d.kind == VarKind::Func {
            let form = DiffForm::from_terms(chart, chart.var_differential(Var(i as u32)).clone());
            writeln!(out, "let d({}) = {}", d.name, form.render()).unwrap();
        }
    }
    for (g, decl) in chart.gens().iter().enumerate() {
        if decl.kind != GenKind::Abstract {
            continue;
        }
        let terms = chart.gen_differential(g);
        if terms.is_empty() {
            writeln!(out, "gen {}", decl.name).unwrap();
        } else {
            let form = DiffForm::from_terms(chart, terms.clone());
            writeln!(out, "gen {0} with d({0}) = {1}", decl.name, form.render()).unwrap();
        }
    }
    for f in &spec.forms {
        writeln!(out, "form {} = {}", f.name, f.form.render()).unwrap();
    }
    if !spec.family.is_empty() {
        writeln!(out, "family {}", spec.family.join(", ")).unwrap();
    }
    let n = chart.num_vars();
    for h in &spec.hints {
        let poly = h.auxiliary.render(&|v: Var| if v.index() < n { chart.var_name(v) } else { format!("lambda{}", v.index() - n + 1) });
        let assumed = if h.assumed { " assumed" } else { "" };
        writeln!(out, "hint {} = {} in [{}, {}]{assumed}", h.name, poly, rational_text(&h.lo), rational_text(&h.hi)).unwrap();
    }
    for (p, holds) in &spec.expectations {
        writeln!(out, "expect {} = {holds}", p.name()).unwrap();
    }
    if !spec.scan.is_empty() {
        writeln!(out, "scan {}", spec.scan.join(", ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    #[test]
    fn fixtures_round_trip() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let Ok(spec) = parse_spec(&std::fs::read_to_string(&path).unwrap()) else { continue };
            let printed = print_spec(&spec);
            let again = parse_spec(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", path.display()));
            assert!(spec == again, "{}:\n{printed}", path.display());
            assert_eq!(print_spec(&again), printed);
        }
    }
}
