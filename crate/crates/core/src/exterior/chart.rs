//! Coordinate contexts: variables, relation groups and 1-form generators.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::form::{Blade, DiffForm, Terms};
use crate::algebra::{Poly, RelationGroup, Relations, Var};
use crate::error::{Error, Result};

/// How a variable's differential is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    /// Owns a generator `d<name>`.
    Coordinate,
    /// A constant: `d = 0`.
    Param,
    /// A function with a declared differential, e.g. `s` standing for `sin θ`.
    Func,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenKind {
    Coordinate(Var),
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenDecl {
    pub name: String,
    pub kind: GenKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Ambient,
    /// Index of the relation group cut out as the host sphere.
    Sphere(usize),
}

/// A chart. Generators are the coordinate differentials in variable order
/// followed by the abstract generators in declaration order.
#[derive(Debug)]
pub struct Chart {
    name: String,
    vars: Vec<VarDecl>,
    gens: Vec<GenDecl>,
    relations: Relations,
    var_diffs: Vec<Terms>,
    gen_diffs: Vec<Terms>,
    mode: Mode,
}

pub const MAX_GENERATORS: usize = 64;

impl Chart {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn gens(&self) -> &[GenDecl] {
        &self.gens
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn var_name(&self, v: Var) -> String {
        self.vars.get(v.index()).map_or_else(|| format!("v{}", v.0), |d| d.name.clone())
    }

    pub fn gen_name(&self, g: usize) -> &str {
        &self.gens[g].name
    }

    /// `∂x` for the dual of `dx`, `∂g` for an abstract generator `g`.
    pub fn dual_name(&self, g: usize) -> String {
        match self.gens[g].kind {
            GenKind::Coordinate(v) => format!("∂{}", self.var_name(v)),
            _ => format!("∂{}", self.gens[g].name),
        }
    }

    pub fn var_kind(&self, v: Var) -> VarKind {
        self.vars[v.index()].kind
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|d| d.name == name).map(|i| Var(i as u32))
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Generator owned by a coordinate variable.
    pub fn gen_of_var(&self, v: Var) -> Option<usize> {
        self.gens.iter().position(|g| g.kind == GenKind::Coordinate(v))
    }

    pub fn var_differential(&self, v: Var) -> &Terms {
        &self.var_diffs[v.index()]
    }

    pub fn gen_differential(&self, g: usize) -> &Terms {
        &self.gen_diffs[g]
    }

    /// Relation groups made of coordinate variables; each cuts one dimension.
    pub fn coordinate_groups(&self) -> Vec<&RelationGroup> {
        self.relations.groups().iter().filter(|g| self.var_kind(g.vars()[0]) == VarKind::Coordinate).collect()
    }

    /// `Σ v dv` over a coordinate group, as 1-form terms.
    pub fn iota(&self, group: &RelationGroup) -> Terms {
        let mut t = Terms::new();
        for &v in group.vars() {
            let g = self.gen_of_var(v).expect("coordinate variable owns a generator");
            t.insert(Blade::single(g), Poly::var(v));
        }
        t
    }

    /// Dimension of the manifold the chart describes.
    pub fn manifold_dim(&self) -> usize {
        self.gens.len() - self.coordinate_groups().len()
    }

    pub fn render_poly(&self, p: &Poly) -> String {
        p.render(&|v| self.var_name(v))
    }

    /// True when both charts declare the same variables, generators and relations.
    pub fn layout_eq(&self, other: &Chart) -> bool {
        self.vars == other.vars && self.gens == other.gens && self.relations == other.relations && self.mode == other.mode
    }

    pub fn same(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
        Arc::ptr_eq(a, b) || a.layout_eq(b)
    }

    /// Copy of the chart with extra parameters appended, optionally tied by a
    /// unit relation. Returns the new chart and the new variables.
    pub fn with_params(&self, names: &[String], unit_group: bool) -> Result<(Arc<Chart>, Vec<Var>)> {
        let mut vars = self.vars.clone();
        let mut new_vars = Vec::new();
        for n in names {
            if self.var(n).is_some() || self.generator(n).is_some() {
                return Err(Error::Input(format!("name `{n}` is reserved for the λ extension but already declared")));
            }
            new_vars.push(Var(vars.len() as u32));
            vars.push(VarDecl { name: n.clone(), kind: VarKind::Param });
        }
        let mut groups = self.relations.groups().to_vec();
        if unit_group && !new_vars.is_empty() {
            groups.push(RelationGroup::new(new_vars.clone())?);
        }
        let relations = Relations::new(groups, vars.len())?;
        let mut var_diffs = self.var_diffs.clone();
        var_diffs.extend(new_vars.iter().map(|_| Terms::new()));
        let chart = Chart {
            name: self.name.clone(),
            vars,
            gens: self.gens.clone(),
            relations,
            var_diffs,
            gen_diffs: self.gen_diffs.clone(),
            mode: self.mode,
        };
        Ok((Arc::new(chart), new_vars))
    }

    /// Variables whose values are unconstrained reals (outside every group).
    pub fn free_vars(&self) -> Vec<Var> {
        (0..self.vars.len() as u32).map(Var).filter(|&v| self.relations.group_of(v).is_none()).collect()
    }
}

/// A chart of coordinates only, optionally the unit sphere in them.
pub fn coordinate_chart(name: &str, coords: &[&str], sphere: bool) -> Result<Arc<Chart>> {
    let mut b = ChartBuilder::new(name);
    let vars: Vec<Var> = coords.iter().map(|c| b.coordinate(c)).collect();
    if sphere {
        let g = b.relation(vars);
        b.sphere(g);
    }
    b.build()
}

/// Incremental chart construction. Differentials are attached as forms over
/// the [`ChartBuilder::skeleton`], which already has the final generator order.
#[derive(Clone, Debug, Default)]
pub struct ChartBuilder {
    name: String,
    vars: Vec<VarDecl>,
    abstract_gens: Vec<String>,
    groups: Vec<Vec<Var>>,
    sphere: Option<usize>,
    var_diffs: HashMap<Var, Terms>,
    gen_diffs: HashMap<String, Terms>,
}

impl ChartBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ChartBuilder { name: name.into(), ..Default::default() }
    }

    fn push_var(&mut self, name: &str, kind: VarKind) -> Var {
        self.vars.push(VarDecl { name: name.to_string(), kind });
        Var(self.vars.len() as u32 - 1)
    }

    pub fn coordinate(&mut self, name: &str) -> Var {
        self.push_var(name, VarKind::Coordinate)
    }

    pub fn param(&mut self, name: &str) -> Var {
        self.push_var(name, VarKind::Param)
    }

    pub fn func(&mut self, name: &str) -> Var {
        self.push_var(name, VarKind::Func)
    }

    pub fn generator(&mut self, name: &str) {
        self.abstract_gens.push(name.to_string());
    }

    /// Adds the relation `Σ v² = 1`; returns the group index.
    pub fn relation(&mut self, vars: Vec<Var>) -> usize {
        self.groups.push(vars);
        self.groups.len() - 1
    }

    pub fn sphere(&mut self, group: usize) {
        self.sphere = Some(group);
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|d| d.name == name).map(|i| Var(i as u32))
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn groups(&self) -> &[Vec<Var>] {
        &self.groups
    }

    pub fn set_var_differential(&mut self, v: Var, form: &DiffForm) -> Result<()> {
        if form.degree().unwrap_or(1) != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: form.degree().unwrap_or(0) });
        }
        self.var_diffs.insert(v, form.terms().clone());
        Ok(())
    }

    pub fn set_gen_differential(&mut self, name: &str, form: &DiffForm) -> Result<()> {
        if form.degree().unwrap_or(2) != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: form.degree().unwrap_or(0) });
        }
        self.gen_diffs.insert(name.to_string(), form.terms().clone());
        Ok(())
    }

    fn layout(&self) -> Result<(Vec<GenDecl>, Relations, Mode)> {
        let mut names = HashSet::new();
        let mut gens = Vec::new();
        for (i, d) in self.vars.iter().enumerate() {
            if !names.insert(d.name.clone()) {
                return Err(Error::Input(format!("duplicate name `{}`", d.name)));
            }
            if d.kind == VarKind::Coordinate {
                gens.push(GenDecl { name: format!("d{}", d.name), kind: GenKind::Coordinate(Var(i as u32)) });
            }
        }
        for g in &self.abstract_gens {
            gens.push(GenDecl { name: g.clone(), kind: GenKind::Abstract });
        }
        for g in &gens {
            if g.kind == GenKind::Abstract && !names.insert(g.name.clone()) {
                return Err(Error::Input(format!("duplicate name `{}`", g.name)));
            }
        }
        let coord_gen_names: HashSet<&str> = gens.iter().filter(|g| g.kind != GenKind::Abstract).map(|g| g.name.as_str()).collect();
        if let Some(clash) = self.vars.iter().find(|d| coord_gen_names.contains(d.name.as_str())) {
            return Err(Error::Input(format!("name `{}` clashes with a coordinate differential", clash.name)));
        }
        if let Some(clash) = self.abstract_gens.iter().find(|g| coord_gen_names.contains(g.as_str())) {
            return Err(Error::Input(format!("generator `{clash}` clashes with a coordinate differential")));
        }
        if gens.len() > MAX_GENERATORS {
            return Err(Error::Input(format!("at most {MAX_GENERATORS} generators are supported")));
        }
        let mut groups = Vec::new();
        for vars in &self.groups {
            let kinds: HashSet<VarKind> = vars.iter().map(|v| self.vars[v.index()].kind).collect();
            if kinds.len() > 1 {
                return Err(Error::Input("a relation group must not mix coordinates, parameters and functions".into()));
            }
            groups.push(RelationGroup::new(vars.clone())?);
        }
        let relations = Relations::new(groups, self.vars.len())?;
        let mode = match self.sphere {
            None => Mode::Ambient,
            Some(gi) => {
                let group = relations.groups().get(gi).ok_or_else(|| Error::Input("sphere group does not exist".into()))?;
                let coords: Vec<Var> =
                    (0..self.vars.len() as u32).map(Var).filter(|v| self.vars[v.index()].kind == VarKind::Coordinate).collect();
                if coords.is_empty() || coords.iter().any(|&v| !group.contains(v)) || group.vars().len() != coords.len() {
                    return Err(Error::Input("the sphere group must consist of exactly the coordinate variables".into()));
                }
                if !self.abstract_gens.is_empty() {
                    return Err(Error::Input("sphere charts cannot carry abstract generators".into()));
                }
                Mode::Sphere(gi)
            }
        };
        Ok((gens, relations, mode))
    }

    /// The chart without differentials, used to express them.
    pub fn skeleton(&self) -> Result<Arc<Chart>> {
        let (gens, relations, mode) = self.layout()?;
        let var_diffs = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, d)| match d.kind {
                VarKind::Coordinate => {
                    let g = gens.iter().position(|g| g.kind == GenKind::Coordinate(Var(i as u32))).unwrap();
                    Terms::from([(Blade::single(g), Poly::one())])
                }
                _ => Terms::new(),
            })
            .collect();
        let gen_diffs = vec![Terms::new(); gens.len()];
        Ok(Arc::new(Chart { name: self.name.clone(), vars: self.vars.clone(), gens, relations, var_diffs, gen_diffs, mode }))
    }

    /// Builds and validates: `d(dv) = 0` for every function, `d(D) = 0` for
    /// every declared generator differential, and function groups respect
    /// their relation.
    pub fn build(&self) -> Result<Arc<Chart>> {
        let skeleton = self.skeleton()?;
        let mut chart = Arc::try_unwrap(skeleton).expect("fresh skeleton is unshared");
        for (&v, terms) in &self.var_diffs {
            let decl = self.vars.get(v.index()).ok_or(Error::UndeclaredVariable(v.0))?;
            if decl.kind != VarKind::Func {
                return Err(Error::Input(format!("`{}` is not a function; only functions take `let d(...)`", decl.name)));
            }
            chart.var_diffs[v.index()] = reduce_terms(&chart.relations, terms);
        }
        for (i, d) in self.vars.iter().enumerate() {
            if d.kind == VarKind::Func && !self.var_diffs.contains_key(&Var(i as u32)) {
                return Err(Error::Input(format!("function `{}` has no declared differential", d.name)));
            }
        }
        for (name, terms) in &self.gen_diffs {
            let g = chart.generator(name).ok_or_else(|| Error::Input(format!("unknown generator `{name}`")))?;
            if chart.gens[g].kind != GenKind::Abstract {
                return Err(Error::Input(format!("`{name}` is a coordinate differential; its differential is zero")));
            }
            chart.gen_diffs[g] = reduce_terms(&chart.relations, terms);
        }
        let chart = Arc::new(chart);
        validate(&chart)?;
        Ok(chart)
    }
}

fn reduce_terms(rel: &Relations, terms: &Terms) -> Terms {
    terms
        .iter()
        .filter_map(|(b, c)| {
            let r = rel.reduce(c);
            (!r.is_zero()).then_some((*b, r))
        })
        .collect::<BTreeMap<_, _>>()
}

fn validate(chart: &Arc<Chart>) -> Result<()> {
    for (i, d) in chart.vars.iter().enumerate() {
        if d.kind != VarKind::Func {
            continue;
        }
        let dv = DiffForm::from_terms(chart, chart.var_diffs[i].clone());
        let ddv = dv.ext_d();
        if !super::eq::form_eq(&ddv, &DiffForm::zero(chart))?.equal {
            return Err(Error::Input(format!("declared differential of `{}` is not closed", d.name)));
        }
    }
    for (g, decl) in chart.gens.iter().enumerate() {
        if decl.kind != GenKind::Abstract {
            continue;
        }
        let dg = DiffForm::from_terms(chart, chart.gen_diffs[g].clone());
        if !super::eq::form_eq(&dg.ext_d(), &DiffForm::zero(chart))?.equal {
            return Err(Error::Input(format!("declared differential of `{}` is not closed", decl.name)));
        }
    }
    for group in chart.relations.groups() {
        if chart.var_kind(group.vars()[0]) != VarKind::Func {
            continue;
        }
        let mut sum = DiffForm::zero(chart);
        for &v in group.vars() {
            sum = &sum + &DiffForm::var_differential(chart, v).scale(&Poly::var(v));
        }
        if !sum.is_zero() {
            let names: Vec<String> = group.vars().iter().map(|&v| chart.var_name(v)).collect();
            return Err(Error::Input(format!("differentials of {} do not respect their unit relation", names.join(", "))));
        }
    }
    Ok(())
}
