//! Brute-force oracles: push every small category through a table map and
//! look at what comes out.
//!
//! Categories are enumerated with the diagonal fixed to the unit and VC2
//! checked as soon as the three entries of a triple are assigned, in order
//! of point count and then lexicographically in the row-major off-diagonal
//! entries.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{classify_table, MorphismError, Verdict, Witness};
use crate::continuous::{grid_unit_quantale, truncated_lawvere, TNorm};
use crate::quantale::{chain, three_nilpotent, two, FiniteQuantale};

/// Cap on the raw candidate count `Σₙ |V|^(n²−n)`.
pub const DEFAULT_CATEGORY_BUDGET: u128 = 10_000_000;
/// Cap on `|W|^|V|` for [`verify_equivalences`].
pub const DEFAULT_FUNCTION_BUDGET: u128 = 100_000;
pub const DEFAULT_NMAX: usize = 3;

/// All `n`-point categories over one quantale, as flat row-major matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryFamily {
    pub n: usize,
    pub matrices: Vec<Vec<usize>>,
}

impl CategoryFamily {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

fn raw_count(size: usize, nmax: usize) -> u128 {
    (1..=nmax)
        .map(|n| {
            let exp = (n * n - n) as u32;
            (size as u128).checked_pow(exp).unwrap_or(u128::MAX)
        })
        .fold(0u128, u128::saturating_add)
}

/// Every category with `1..=nmax` points.
pub fn enumerate_categories(
    q: &FiniteQuantale,
    nmax: usize,
    budget: u128,
) -> Result<Vec<CategoryFamily>, MorphismError> {
    let count = raw_count(q.len(), nmax);
    if count > budget {
        return Err(MorphismError::Budget {
            what: format!("enumerating categories with up to {nmax} points"),
            count,
            cap: budget,
        });
    }
    Ok((1..=nmax).map(|n| enumerate_n(q, n)).collect())
}

fn enumerate_n(q: &FiniteQuantale, n: usize) -> CategoryFamily {
    let unit = q.unit_index();
    let slots: Vec<usize> = (0..n * n).filter(|i| i / n != i % n).collect();
    // position of each entry in assignment order; diagonal entries come first
    let mut order = vec![0usize; n * n];
    for (k, &s) in slots.iter().enumerate() {
        order[s] = k + 1;
    }
    // triples to check once slot k is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); slots.len() + 1];
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let (xz, zy, xy) = (x * n + z, z * n + y, x * n + y);
                let last = order[xz].max(order[zy]).max(order[xy]);
                checks[last].push((xz, zy, xy));
            }
        }
    }
    let mut m = vec![unit; n * n];
    let mut out = Vec::new();
    fill(q, &slots, &checks, 0, &mut m, &mut out);
    CategoryFamily { n, matrices: out }
}

fn fill(
    q: &FiniteQuantale,
    slots: &[usize],
    checks: &[Vec<(usize, usize, usize)>],
    k: usize,
    m: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == slots.len() {
        out.push(m.clone());
        return;
    }
    for e in q.elements() {
        m[slots[k]] = e;
        let ok = checks[k + 1]
            .iter()
            .all(|&(xz, zy, xy)| q.leq_idx(q.tensor_idx(m[xz], m[zy]), m[xy]));
        if ok {
            fill(q, slots, checks, k + 1, m, out);
        }
    }
}

fn is_symmetric(m: &[usize], n: usize) -> bool {
    (0..n).all(|x| (0..n).all(|y| m[x * n + y] == m[y * n + x]))
}

fn separation_pair(q: &FiniteQuantale, m: &[usize], n: usize) -> Option<(usize, usize)> {
    let unit = q.unit_index();
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| m[x * n + y] == unit && m[y * n + x] == unit)
}

fn point(i: usize) -> String {
    format!("x{}", i + 1)
}

fn render_matrix(q: &FiniteQuantale, m: &[usize], n: usize) -> String {
    let rows: Vec<String> = m
        .chunks(n)
        .map(|r| r.iter().map(|&e| q.label_of(e)).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// First VC1/VC2 failure of `F ∘ a`, as a witness in terms of `a`.
fn image_failure(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
    m: &[usize],
    n: usize,
) -> Option<Witness> {
    let img: Vec<usize> = m.iter().map(|&e| table[e]).collect();
    let detail = || {
        Some(format!(
            "a = {}, F∘a = {}",
            render_matrix(v, m, n),
            render_matrix(w, &img, n)
        ))
    };
    let wu = w.unit_index();
    if let Some(x) = (0..n).find(|&x| !w.leq_idx(wu, img[x * n + x])) {
        return Some(Witness {
            elements: vec![format!("a({0},{0}) = {1}", point(x), v.label_of(m[x * n + x]))],
            relation: "1 ⪯ F∘a(x,x)".into(),
            lhs: w.label_of(wu).into(),
            rhs: w.label_of(img[x * n + x]).into(),
            detail: detail(),
        });
    }
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let (xz, zy, xy) = (x * n + z, z * n + y, x * n + y);
                let lhs = w.tensor_idx(img[xz], img[zy]);
                if !w.leq_idx(lhs, img[xy]) {
                    let (px, pz, py) = (point(x), point(z), point(y));
                    return Some(Witness {
                        elements: vec![
                            format!("a({px},{pz}) = {}", v.label_of(m[xz])),
                            format!("a({pz},{py}) = {}", v.label_of(m[zy])),
                            format!("a({px},{py}) = {}", v.label_of(m[xy])),
                        ],
                        relation: "F∘a(x,z) ⋆ F∘a(z,y) ⪯ F∘a(x,y)".into(),
                        lhs: w.label_of(lhs).into(),
                        rhs: w.label_of(img[xy]).into(),
                        detail: detail(),
                    });
                }
            }
        }
    }
    None
}

fn separation_failure(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
    m: &[usize],
    n: usize,
) -> Option<Witness> {
    let img: Vec<usize> = m.iter().map(|&e| table[e]).collect();
    separation_pair(w, &img, n).map(|(x, y)| Witness {
        elements: vec![
            format!("a({},{}) = {}", point(x), point(y), v.label_of(m[x * n + y])),
            format!("a({},{}) = {}", point(y), point(x), v.label_of(m[y * n + x])),
        ],
        relation: "F∘a(x,y) = F∘a(y,x) = 1 ⇒ x = y".into(),
        lhs: point(x),
        rhs: point(y),
        detail: Some(format!(
            "a = {}, F∘a = {}",
            render_matrix(v, m, n),
            render_matrix(w, &img, n)
        )),
    })
}

/// Is every V-functor between symmetric categories with at most two points
/// sent to a W-functor?
fn functor_failure(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
    small: &[&CategoryFamily],
) -> Option<Witness> {
    let cats: Vec<(usize, &Vec<usize>)> = small
        .iter()
        .flat_map(|f| f.matrices.iter().map(move |m| (f.n, m)))
        .filter(|(n, m)| is_symmetric(m, *n))
        .collect();
    for &(na, a) in &cats {
        for &(nb, b) in &cats {
            for code in 0..nb.pow(na as u32) {
                let map: Vec<usize> = (0..na).map(|i| code / nb.pow(i as u32) % nb).collect();
                let pairs = || (0..na).flat_map(|x| (0..na).map(move |y| (x, y)));
                let hom_b = |x: usize, y: usize| b[map[x] * nb + map[y]];
                if !pairs().all(|(x, y)| v.leq_idx(a[x * na + y], hom_b(x, y))) {
                    continue;
                }
                let bad = pairs().find(|&(x, y)| !w.leq_idx(table[a[x * na + y]], table[hom_b(x, y)]));
                if let Some((x, y)) = bad {
                    let fa = table[a[x * na + y]];
                    let fb = table[hom_b(x, y)];
                    return Some(Witness {
                        elements: vec![
                            format!("a = {}", render_matrix(v, a, na)),
                            format!("b = {}", render_matrix(v, b, nb)),
                            format!(
                                "f = [{}]",
                                map.iter().map(|&i| point(i)).collect::<Vec<_>>().join(", ")
                            ),
                        ],
                        relation: "F∘a(x,y) ⪯ F∘b(fx,fy)".into(),
                        lhs: w.label_of(fa).into(),
                        rhs: w.label_of(fb).into(),
                        detail: Some(format!("at (x,y) = ({},{})", point(x), point(y))),
                    });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceReport {
    pub nmax: usize,
    pub categories_checked: usize,
    pub preserving: Verdict,
    pub separately_preserving: Verdict,
    pub symmetrically_preserving: Verdict,
    /// Symmetric categories and functors between them.
    pub functor_preserving: Verdict,
    pub symmetrically_cat_preserving: Verdict,
}

/// The preservation verdicts of a table map, read off from every category
/// in `families`.
pub fn brute_force_on(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
    families: &[CategoryFamily],
) -> BruteForceReport {
    let mut preserving = None;
    let mut separately = None;
    let mut symmetric = None;
    let mut checked = 0;
    for fam in families {
        let n = fam.n;
        for m in &fam.matrices {
            checked += 1;
            let failure = image_failure(table, v, w, m, n);
            let separated = separation_pair(v, m, n).is_none();
            if preserving.is_none() {
                preserving = failure.clone();
            }
            if separately.is_none() && separated {
                separately = failure
                    .clone()
                    .or_else(|| separation_failure(table, v, w, m, n));
            }
            if symmetric.is_none() && is_symmetric(m, n) {
                symmetric = failure;
            }
        }
    }
    let small: Vec<&CategoryFamily> = families.iter().filter(|f| f.n <= 2).collect();
    let functor = functor_failure(table, v, w, &small);
    let verdict = |w: Option<Witness>| w.map_or(Verdict::HoldsExhaustive, Verdict::Fails);
    let symmetric = verdict(symmetric);
    let functor = verdict(functor);
    BruteForceReport {
        nmax: families.iter().map(|f| f.n).max().unwrap_or(0),
        categories_checked: checked,
        preserving: verdict(preserving),
        separately_preserving: verdict(separately),
        symmetrically_cat_preserving: Verdict::all_of(&[&symmetric, &functor]),
        symmetrically_preserving: symmetric,
        functor_preserving: functor,
    }
}

pub fn brute_force_preserving(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
    nmax: usize,
) -> Result<BruteForceReport, MorphismError> {
    let families = enumerate_categories(v, nmax, DEFAULT_CATEGORY_BUDGET)?;
    Ok(brute_force_on(table, v, w, &families))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub preserving: bool,
    pub separately_preserving: bool,
    pub symmetrically_preserving: bool,
    pub symmetrically_cat_preserving: bool,
    pub count: usize,
    /// Up to [`CLASS_EXAMPLES`] members, as `src↦dst` lists.
    pub examples: Vec<String>,
}

pub const CLASS_EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceSummary {
    pub from: String,
    pub to: String,
    pub nmax: usize,
    pub functions: usize,
    pub categories: usize,
    pub counts: BTreeMap<String, usize>,
    pub classes: Vec<ClassRow>,
    pub disagreements: Vec<String>,
}

impl EquivalenceSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} -> {}: {} functions, {} categories with up to {} points\n",
            self.from, self.to, self.functions, self.categories, self.nmax
        );
        for (k, v) in &self.counts {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out.push_str("  classes (preserving, separately, symmetrically, sym-Cat):\n");
        for c in &self.classes {
            let b = |x: bool| if x { "yes" } else { "no" };
            out.push_str(&format!(
                "    {:<3} {:<3} {:<3} {:<3} x{}: {}\n",
                b(c.preserving),
                b(c.separately_preserving),
                b(c.symmetrically_preserving),
                b(c.symmetrically_cat_preserving),
                c.count,
                c.examples.join(" | ")
            ));
        }
        if self.disagreements.is_empty() {
            out.push_str("  no disagreements\n");
        }
        for d in &self.disagreements {
            out.push_str(&format!("  DISAGREEMENT: {d}\n"));
        }
        out
    }
}

pub fn render_table(table: &[usize], v: &FiniteQuantale, w: &FiniteQuantale) -> String {
    table
        .iter()
        .enumerate()
        .map(|(i, &j)| format!("{}↦{}", v.label_of(i), w.label_of(j)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Runs every function `V → W` through [`classify_table`] and the brute-force
/// oracle and reports each place where a characterization disagrees.
pub fn verify_equivalences(
    from: &str,
    v: &FiniteQuantale,
    to: &str,
    w: &FiniteQuantale,
    nmax: usize,
) -> Result<EquivalenceSummary, MorphismError> {
    let count = (w.len() as u128)
        .checked_pow(v.len() as u32)
        .unwrap_or(u128::MAX);
    if count > DEFAULT_FUNCTION_BUDGET {
        return Err(MorphismError::Budget {
            what: format!("enumerating functions {from} -> {to}"),
            count,
            cap: DEFAULT_FUNCTION_BUDGET,
        });
    }
    let families = enumerate_categories(v, nmax, DEFAULT_CATEGORY_BUDGET)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut classes: Vec<ClassRow> = Vec::new();
    let mut disagreements = Vec::new();
    let mut table = vec![0usize; v.len()];
    for _ in 0..count {
        let r = classify_table(&table, v, w)?;
        let b = brute_force_on(&table, v, w, &families);
        let name = render_table(&table, v, w);
        let mut agree = |what: &str, x: bool, y: bool| {
            if x != y {
                disagreements.push(format!("{name}: {what} ({x} vs {y})"));
            }
        };
        let lax = r.lax_morphism.holds();
        let asym_unit = r.asym_triplet_preserving.holds() && r.unit_equality.holds();
        let fiber = r.unit_fiber_singleton.holds();
        let trip_unit = r.triplet_preserving.holds() && r.unit_equality.holds();
        agree("brute-force preserving vs lax morphism", b.preserving.holds(), lax);
        agree("lax morphism vs asymmetric triplets and unit", lax, asym_unit);
        agree(
            "brute-force separately preserving vs lax with singleton unit fiber",
            b.separately_preserving.holds(),
            lax && fiber,
        );
        agree(
            "brute-force symmetrically preserving vs triplets and unit",
            b.symmetrically_preserving.holds(),
            trip_unit,
        );
        agree(
            "brute-force symmetrically Cat-preserving vs isotone, triplets and unit",
            b.symmetrically_cat_preserving.holds(),
            r.isotone.holds() && trip_unit,
        );
        agree(
            "brute-force symmetrically Cat-preserving vs brute-force preserving",
            b.symmetrically_cat_preserving.holds(),
            b.preserving.holds(),
        );
        agree(
            "functor preservation vs isotone",
            b.functor_preserving.holds(),
            r.isotone.holds(),
        );
        for d in &r.disagreements {
            disagreements.push(format!("{name}: {d}"));
        }

        let flags = [
            ("preserving", b.preserving.holds()),
            ("separately_preserving", b.separately_preserving.holds()),
            ("symmetrically_preserving", b.symmetrically_preserving.holds()),
            ("symmetrically_cat_preserving", b.symmetrically_cat_preserving.holds()),
            ("lax_morphism", lax),
            (
                "symmetrically_but_not_preserving",
                b.symmetrically_preserving.holds() && !b.preserving.holds(),
            ),
        ];
        for (k, on) in flags {
            *counts.entry(k.to_string()).or_default() += usize::from(on);
        }
        let key = (flags[0].1, flags[1].1, flags[2].1, flags[3].1);
        let row = match classes.iter_mut().find(|c| {
            (
                c.preserving,
                c.separately_preserving,
                c.symmetrically_preserving,
                c.symmetrically_cat_preserving,
            ) == key
        }) {
            Some(row) => row,
            None => {
                classes.push(ClassRow {
                    preserving: key.0,
                    separately_preserving: key.1,
                    symmetrically_preserving: key.2,
                    symmetrically_cat_preserving: key.3,
                    count: 0,
                    examples: Vec::new(),
                });
                classes.last_mut().expect("just pushed")
            }
        };
        row.count += 1;
        if row.examples.len() < CLASS_EXAMPLES {
            row.examples.push(name);
        }

        // next table, last element varying fastest
        for slot in table.iter_mut().rev() {
            *slot += 1;
            if *slot < w.len() {
                break;
            }
            *slot = 0;
        }
    }
    classes.sort_by_key(|c| {
        std::cmp::Reverse((
            c.preserving,
            c.separately_preserving,
            c.symmetrically_preserving,
            c.symmetrically_cat_preserving,
        ))
    });
    Ok(EquivalenceSummary {
        from: from.into(),
        to: to.into(),
        nmax,
        functions: count as usize,
        categories: families.iter().map(CategoryFamily::len).sum(),
        counts,
        classes,
        disagreements,
    })
}

/// The pairs checked by default: `(name, V, name, W)`.
pub fn default_roster() -> Vec<(String, FiniteQuantale, String, FiniteQuantale)> {
    let grid = grid_unit_quantale(TNorm::Lukasiewicz, 2).expect("the half grid is closed");
    let pair = |a: &str, v: FiniteQuantale, b: &str, w: FiniteQuantale| (a.to_string(), v, b.to_string(), w);
    vec![
        pair("two", two(), "two", two()),
        pair("chain:3", chain(3), "two", two()),
        pair("two", two(), "chain:3", chain(3)),
        pair("three-paper", three_nilpotent(), "three-paper", three_nilpotent()),
        pair("lawvere-trunc:2", truncated_lawvere(2), "lawvere-trunc:2", truncated_lawvere(2)),
        pair("grid:luk:2", grid.clone(), "grid:luk:2", grid),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_categories_are_all_matrices() {
        let q = three_nilpotent();
        let fams = enumerate_categories(&q, 3, DEFAULT_CATEGORY_BUDGET).unwrap();
        assert_eq!(fams[0].len(), 1);
        assert_eq!(fams[1].len(), 9);
        assert!(fams[2].len() < 729);
        for m in &fams[2].matrices {
            for x in 0..3 {
                for z in 0..3 {
                    for y in 0..3 {
                        assert!(q.leq_idx(q.tensor_idx(m[x * 3 + z], m[z * 3 + y]), m[x * 3 + y]));
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let q = truncated_lawvere(9);
        assert!(matches!(
            enumerate_categories(&q, 4, DEFAULT_CATEGORY_BUDGET),
            Err(MorphismError::Budget { .. })
        ));
    }

    #[test]
    fn three_element_map_fails_on_a_three_point_category() {
        let q = three_nilpotent();
        let r = brute_force_preserving(&[1, 0, 2], &q, &q, 3).unwrap();
        let w = r.preserving.witness().unwrap();
        assert_eq!(w.elements.len(), 3);
        // a(x,z) and a(z,y) are ⊥ and ⊤ in some order, a(x,y) = x
        let mut homs: Vec<&str> = w.elements.iter().map(|e| e.rsplit(" = ").next().unwrap()).collect();
        assert_eq!(homs.pop(), Some("x"));
        homs.sort_unstable();
        assert_eq!(homs, vec!["bot", "top"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("x", "bot"));
        assert!(r.symmetrically_preserving.holds());
        assert!(!r.symmetrically_cat_preserving.holds());
    }

    #[test]
    fn identity_preserves_everything() {
        let q = three_nilpotent();
        let r = brute_force_preserving(&[0, 1, 2], &q, &q, 3).unwrap();
        assert!(r.preserving.holds() && r.separately_preserving.holds());
        assert!(r.symmetrically_cat_preserving.holds());
    }

    #[test]
    fn two_to_two() {
        let s = verify_equivalences("two", &two(), "two", &two(), 3).unwrap();
        assert_eq!(s.functions, 4);
        assert_eq!(s.counts["preserving"], 2);
        assert!(s.disagreements.is_empty(), "{:?}", s.disagreements);
        let mut pres: Vec<&String> = s
            .classes
            .iter()
            .filter(|c| c.preserving)
            .flat_map(|c| &c.examples)
            .collect();
        pres.sort();
        assert_eq!(pres, vec!["0↦0, 1↦1", "0↦1, 1↦1"]);
        assert_eq!(s.counts["separately_preserving"], 1);
    }

    #[test]
    fn three_element_self_maps() {
        let q = three_nilpotent();
        let s = verify_equivalences("three-paper", &q, "three-paper", &q, 3).unwrap();
        assert_eq!(s.functions, 27);
        assert!(s.disagreements.is_empty(), "{:?}", s.disagreements);
        let row = s
            .classes
            .iter()
            .find(|c| c.symmetrically_preserving && !c.preserving)
            .unwrap();
        assert!(row.examples.contains(&"bot↦x, x↦bot, top↦top".to_string()));
    }

    #[test]
    fn function_budget() {
        let q = truncated_lawvere(8);
        assert!(matches!(
            verify_equivalences("a", &q, "b", &q, 2),
            Err(MorphismError::Budget { .. })
        ));
    }
}
