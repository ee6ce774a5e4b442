//! Random spec-file text for round-trip tests.

use proptest::prelude::*;
use proptest::sample::subsequence;

#[derive(Clone, Debug)]
struct Layout {
    vars: Vec<String>,
    sphere: bool,
    circle: bool,
    param: bool,
}

impl Layout {
    /// Names that may appear as monomial factors.
    fn scalars(&self) -> Vec<String> {
        let mut out = self.vars.clone();
        if self.circle {
            out.extend(["s".to_string(), "c".to_string()]);
        }
        if self.param {
            out.push("k".into());
        }
        out
    }

    fn generators(&self) -> Vec<String> {
        let mut out: Vec<String> = self.vars.iter().map(|v| format!("d{v}")).collect();
        if self.circle {
            out.extend(["g1".to_string(), "g2".to_string(), "a".to_string()]);
        }
        out
    }

    fn header(&self) -> String {
        let mut t = format!("chart rand{}\n", if self.sphere { " sphere" } else { "" });
        t += &format!("vars {}\n", self.vars.join(" "));
        if self.param {
            t += "params k\n";
        }
        if self.sphere {
            let squares: Vec<String> = self.vars.iter().map(|v| format!("{v}^2")).collect();
            t += &format!("relation {} = 1\n", squares.join(" + "));
        }
        if self.circle {
            t += "funcs s c\nrelation s^2 + c^2 = 1\nlet d(s) = c*g1\nlet d(c) = -s*g1\ngen g1 g2\ngen a with d(a) = -g1^g2\n";
        }
        t
    }
}

fn layout() -> impl Strategy<Value = Layout> {
    (1usize..=4, any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(n, sphere, circle, param)| Layout {
        vars: (1..=n).map(|i| format!("x{i}")).collect(),
        sphere: sphere && n >= 2,
        // sphere charts take no abstract generators
        circle: circle && !(sphere && n >= 2),
        param,
    })
}

fn coefficient() -> impl Strategy<Value = String> {
    (1i64..=5, 1i64..=4, any::<bool>()).prop_map(|(p, q, neg)| {
        let sign = if neg { "-" } else { "" };
        if q == 1 {
            format!("{sign}{p}")
        } else {
            format!("{sign}{p}/{q}")
        }
    })
}

/// Sum of distinct terms; factors are distinct so nothing reduces or cancels.
fn form(layout: &Layout, degree: usize) -> BoxedStrategy<String> {
    let scalars = layout.scalars();
    let gens = layout.generators();
    if degree > gens.len() {
        return Just(String::new()).boxed();
    }
    let term = (coefficient(), subsequence(scalars.clone(), 0..=2.min(scalars.len())), subsequence(gens, degree));
    proptest::collection::vec(term, 1..=3)
        .prop_map(move |terms| {
            let mut seen = std::collections::BTreeSet::new();
            let mut parts = Vec::new();
            for (c, mono, g) in terms {
                if !seen.insert((mono.clone(), g.clone())) {
                    continue;
                }
                let mut factors = vec![c];
                factors.extend(mono);
                let mut text = factors.join("*");
                if !g.is_empty() {
                    text = format!("{text}*{}", g.join("^"));
                }
                parts.push(text);
            }
            parts.join(" + ")
        })
        .boxed()
}

const PROPERTIES: [&str; 4] = ["contact", "psphere", "taut", "round"];

pub fn spec_text() -> impl Strategy<Value = String> {
    layout()
        .prop_flat_map(|lay| {
            let degrees = proptest::collection::vec(0usize..=2, 1..=4);
            (Just(lay), degrees).prop_flat_map(|(lay, degrees)| {
                let forms: Vec<BoxedStrategy<(usize, String)>> =
                    degrees.iter().map(|&d| form(&lay, d).prop_map(move |f| (d, f)).boxed()).collect();
                let expects = subsequence(PROPERTIES.to_vec(), 0..=4).prop_flat_map(|ps| {
                    let n = ps.len();
                    (Just(ps), proptest::collection::vec(any::<bool>(), n))
                });
                (Just(lay), forms, expects, any::<bool>(), any::<bool>(), any::<bool>())
            })
        })
        .prop_map(|(lay, forms, (props, values), explicit_family, with_hint, assumed)| {
            let mut t = lay.header();
            let mut ones = Vec::new();
            let mut zeros = Vec::new();
            for (i, (d, f)) in forms.iter().enumerate() {
                if f.is_empty() {
                    continue;
                }
                let name = format!("f{i}");
                t += &format!("form {name} = {f}\n");
                match d {
                    0 => zeros.push(name),
                    1 => ones.push(name),
                    _ => {}
                }
            }
            if explicit_family && !ones.is_empty() {
                t += &format!("family {}\n", ones.join(", "));
            }
            if with_hint && !ones.is_empty() {
                let last = ones.len();
                t += &format!(
                    "hint u = lambda1*{} - 2*lambda{last} + 1/2 in [-3, 7/2]{}\n",
                    lay.vars[0],
                    if assumed { " assumed" } else { "" }
                );
            }
            for (p, v) in props.iter().zip(values) {
                t += &format!("expect {p} = {v}\n");
            }
            if !zeros.is_empty() {
                t += &format!("scan {}\n", zeros.join(", "));
            }
            t
        })
}
