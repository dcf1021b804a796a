//! Min-max exponent program for point/unit-sphere incidences.
//!
//! With `D = n^β` and `E = n^δ`, every contribution to the incidence count
//! is `n` raised to an exponent of the form
//! `c0 + cα·α + cβ·β + cδ·δ + cαβ·αβ + cαδ·αδ`. The program minimizes the
//! largest such exponent subject to `0 ≤ α ≤ 1/2`, `0 ≤ β ≤ 1/3` and
//! `0 ≤ δ ≤ 1/3 − β/2`. For a fixed `α` every exponent is affine in
//! `(β, δ)`, so the inner problem is an exact LP in `(β, δ, t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// `c0 + cα·α + cβ·β + cδ·δ + cαβ·αβ + cαδ·αδ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentTerm {
    pub label: String,
    pub c0: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub delta: Rational,
    pub alpha_beta: Rational,
    pub alpha_delta: Rational,
}

/// Term specialized to a fixed `α`: `constant + beta·β + delta·δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineTerm {
    pub constant: Rational,
    pub beta: Rational,
    pub delta: Rational,
}

impl AffineTerm {
    pub fn eval(&self, beta: &Rational, delta: &Rational) -> Rational {
        &self.constant + &self.beta * beta + &self.delta * delta
    }
}

impl ExponentTerm {
    pub fn eval(&self, alpha: &Rational, beta: &Rational, delta: &Rational) -> Rational {
        self.at_alpha(alpha).eval(beta, delta)
    }

    pub fn at_alpha(&self, alpha: &Rational) -> AffineTerm {
        AffineTerm {
            constant: &self.c0 + &self.alpha * alpha,
            beta: &self.beta + &self.alpha_beta * alpha,
            delta: &self.delta + &self.alpha_delta * alpha,
        }
    }

    /// Equal as polynomials in `(α, β, δ)`, ignoring labels.
    pub fn same_polynomial(&self, o: &ExponentTerm) -> bool {
        self.coefficients() == o.coefficients()
    }

    pub fn coefficients(&self) -> [&Rational; 6] {
        [&self.c0, &self.alpha, &self.beta, &self.delta, &self.alpha_beta, &self.alpha_delta]
    }
}

fn r(s: &str) -> Rational {
    s.parse().expect("valid literal")
}

/// Builds a term from coefficient literals `[c0, cα, cβ, cδ, cαβ, cαδ]`.
fn term(label: &str, c: [&str; 6]) -> ExponentTerm {
    ExponentTerm {
        label: label.to_string(),
        c0: r(c[0]),
        alpha: r(c[1]),
        beta: r(c[2]),
        delta: r(c[3]),
        alpha_beta: r(c[4]),
        alpha_delta: r(c[5]),
    }
}

/// The 26 exponents, grouped by the bound they come from. Repeated entries
/// (`2 − 3β` five times, `1 + 4δ` three times) are kept under distinct
/// labels.
pub fn term_table() -> Vec<ExponentTerm> {
    vec![
        //                                      c0        α        β        δ       αβ       αδ
        term("spheresToCircles-1", ["1", "0", "2", "0", "0", "0"]),
        term("spheresToCircles-2", ["2", "0", "-3", "0", "0", "0"]),
        term("contribDegenerate", ["1", "1", "0", "0", "0", "0"]),
        term("caseA1", ["65/44", "0", "0", "0", "0", "0"]),
        term("caseA2-1", ["114/55", "4/55", "-27/11", "0", "0", "0"]),
        term("caseA2-2", ["28/15", "1/5", "-2", "0", "0", "0"]),
        term("caseA2-3", ["4/5", "4/5", "0", "0", "0", "0"]),
        term("caseA2-4", ["2", "0", "-3", "0", "0", "0"]),
        term("contribDegenerateB-1", ["2", "0", "-3", "0", "0", "0"]),
        term("contribDegenerateB-2", ["6/11", "18/11", "0", "54/11", "-27/11", "-54/11"]),
        term("contribDegenerateB-3", ["2/3", "4/3", "0", "14/3", "-2", "-4"]),
        term("contribDegenerateB-4", ["1", "0", "0", "4", "0", "0"]),
        term("contribDegenerateB-5", ["0", "2", "0", "6", "-3", "-6"]),
        term("caseB1-1", ["24/11", "-8/11", "-27/11", "0", "12/11", "24/11"]),
        term("caseB1-2", ["2", "-2/3", "-2", "2/3", "1", "2"]),
        term("caseB1-3", ["1", "0", "0", "4", "0", "0"]),
        term("caseB1-4", ["2", "0", "-3", "0", "0", "0"]),
        term("caseB2-1", ["114/55", "8/55", "-27/11", "12/55", "-12/55", "-24/55"]),
        term("caseB2-2", ["28/15", "2/5", "-2", "14/15", "-3/5", "-6/5"]),
        term("caseB2-3", ["4/5", "8/5", "0", "22/5", "-12/5", "-24/5"]),
        term("caseB2-4", ["2", "0", "-3", "0", "0", "0"]),
        term("caseC-1", ["2", "0", "-9/4", "1/2", "0", "0"]),
        term("caseC-2", ["2", "-2/3", "-2", "2/3", "1", "2"]),
        term("caseC-3", ["1", "0", "0", "4", "0", "0"]),
        term("caseC-4", ["8/3", "0", "-4", "-2", "0", "0"]),
        term("caseC-5", ["3", "-1", "-9/2", "-3", "3/2", "3"]),
    ]
}

/// The certified optimum `α = 5/17`, `β = 49/197`, `δ = 37/394`.
pub fn reference_point() -> (Rational, Rational, Rational) {
    (Rational::frac(5, 17), Rational::frac(49, 197), Rational::frac(37, 394))
}

/// Optimal exponent `295/197`.
pub fn reference_value() -> Rational {
    Rational::frac(295, 197)
}

/// Values of every term at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub values: Vec<(String, Rational)>,
    pub max: Rational,
    pub argmax: Vec<String>,
}

pub fn evaluate_all(terms: &[ExponentTerm], alpha: &Rational, beta: &Rational, delta: &Rational) -> Evaluation {
    let values: Vec<(String, Rational)> =
        terms.iter().map(|t| (t.label.clone(), t.eval(alpha, beta, delta))).collect();
    let max = values.iter().map(|(_, v)| v).max().cloned().unwrap_or_else(Rational::zero);
    let argmax = values.iter().filter(|(_, v)| *v == max).map(|(l, _)| l.clone()).collect();
    Evaluation { values, max, argmax }
}

pub fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha > Rational::frac(1, 2) {
        return Err(Error::OutOfRange(alpha.to_string()));
    }
    Ok(())
}

/// Optimal `(β, δ)` and value of the inner LP at a fixed `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedAlphaOptimum {
    pub beta: Rational,
    pub delta: Rational,
    pub value: Rational,
}

/// Half-space `coef · (β, δ, t) ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct HalfSpace {
    coef: [Rational; 3],
    rhs: Rational,
}

impl HalfSpace {
    fn holds(&self, x: &[Rational; 3]) -> bool {
        let lhs = &self.coef[0] * &x[0] + &self.coef[1] * &x[1] + &self.coef[2] * &x[2];
        lhs >= self.rhs
    }
}

/// The feasible region in `(β, δ)`: `β ≥ 0`, `β ≤ 1/3`, `δ ≥ 0`,
/// `δ ≤ 1/3 − β/2`, each as `a·β + b·δ ≥ c`.
pub fn box_constraints() -> [(Rational, Rational, Rational); 4] {
    let z = Rational::zero;
    let one = Rational::one;
    [
        (one(), z(), z()),
        (-one(), z(), -Rational::frac(1, 3)),
        (z(), one(), z()),
        (-Rational::frac(1, 2), -one(), -Rational::frac(1, 3)),
    ]
}

fn epigraph(terms: &[ExponentTerm], alpha: &Rational) -> Vec<HalfSpace> {
    let mut hs: Vec<HalfSpace> = Vec::new();
    for t in terms {
        // t ≥ constant + β·b + δ·d  <=>  -b·β - d·δ + t ≥ constant
        let a = t.at_alpha(alpha);
        let h = HalfSpace {
            coef: [-a.beta, -a.delta, Rational::one()],
            rhs: a.constant,
        };
        if !hs.contains(&h) {
            hs.push(h);
        }
    }
    for (b, d, c) in box_constraints() {
        hs.push(HalfSpace {
            coef: [b, d, Rational::zero()],
            rhs: c,
        });
    }
    hs
}

fn det3(m: [&[Rational; 3]; 3]) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Exact LP at fixed `α` over the full table.
pub fn solve_fixed_alpha(alpha: &Rational) -> Result<FixedAlphaOptimum> {
    solve_fixed_alpha_with(&term_table(), alpha)
}

/// Exact LP `min t` s.t. `t ≥ term_i(α; β, δ)` and the box, by enumerating
/// every vertex (each feasible intersection of three constraint planes).
/// Among optimal vertices the lexicographically smallest `(β, δ)` wins.
pub fn solve_fixed_alpha_with(terms: &[ExponentTerm], alpha: &Rational) -> Result<FixedAlphaOptimum> {
    check_alpha(alpha)?;
    let hs = epigraph(terms, alpha);
    let mut best: Option<[Rational; 3]> = None;
    let n = hs.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(x) = vertex(&hs[i], &hs[j], &hs[k]) else {
                    continue;
                };
                if let Some(b) = &best {
                    // cheap reject before the feasibility scan
                    if (&x[2], &x[0], &x[1]) >= (&b[2], &b[0], &b[1]) {
                        continue;
                    }
                }
                if hs.iter().all(|h| h.holds(&x)) {
                    best = Some(x);
                }
            }
        }
    }
    let [beta, delta, value] = best.ok_or_else(|| Error::InvalidArgument("empty exponent table".into()))?;
    Ok(FixedAlphaOptimum { beta, delta, value })
}

fn vertex(a: &HalfSpace, b: &HalfSpace, c: &HalfSpace) -> Option<[Rational; 3]> {
    let m = [&a.coef, &b.coef, &c.coef];
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let rhs = [&a.rhs, &b.rhs, &c.rhs];
    let col = |j: usize| {
        let rows: [[Rational; 3]; 3] = std::array::from_fn(|i| {
            let mut row = m[i].clone();
            row[j] = rhs[i].clone();
            row
        });
        det3([&rows[0], &rows[1], &rows[2]]) / &det
    };
    Some([col(0), col(1), col(2)])
}

/// Optimum with the exact set of terms attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimumCertificate {
    pub alpha: Rational,
    pub beta: Rational,
    pub delta: Rational,
    pub value: Rational,
    #[serde(rename = "tight")]
    pub tight_labels: Vec<String>,
}

impl OptimumCertificate {
    /// Every term is `≤ value`, the tight ones exactly `= value`, and the
    /// point satisfies the constraints.
    pub fn is_valid(&self, terms: &[ExponentTerm]) -> bool {
        let ev = evaluate_all(terms, &self.alpha, &self.beta, &self.delta);
        let in_box = box_constraints()
            .iter()
            .all(|(b, d, c)| b * &self.beta + d * &self.delta >= *c);
        in_box && check_alpha(&self.alpha).is_ok() && ev.max == self.value && ev.argmax == self.tight_labels
    }
}

pub fn certificate(alpha: &Rational) -> Result<OptimumCertificate> {
    let terms = term_table();
    let opt = solve_fixed_alpha_with(&terms, alpha)?;
    let ev = evaluate_all(&terms, alpha, &opt.beta, &opt.delta);
    debug_assert_eq!(ev.max, opt.value);
    Ok(OptimumCertificate {
        alpha: alpha.clone(),
        beta: opt.beta,
        delta: opt.delta,
        value: opt.value,
        tight_labels: ev.argmax,
    })
}

/// `v(α)` on a grid over `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaScan {
    pub points: Vec<(Rational, Rational)>,
    pub best_alpha: Rational,
    pub best_value: Rational,
    /// `v(5/17)`.
    pub reference_value: Rational,
    /// Whether `v(5/17)` is at most every grid value. Grid evidence only:
    /// the joint problem is not convex in `α`.
    pub reference_not_beaten: bool,
}

/// Grid `0, step, 2·step, …` up to and including `1/2`.
pub fn alpha_grid(step: &Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return Err(Error::OutOfRange(step.to_string()));
    }
    let half = Rational::frac(1, 2);
    let mut grid = Vec::new();
    let mut a = Rational::zero();
    while a < half {
        grid.push(a.clone());
        a += step;
    }
    grid.push(half);
    Ok(grid)
}

pub fn scan_alpha(step: &Rational) -> Result<AlphaScan> {
    let grid = alpha_grid(step)?;
    let terms = term_table();
    let solve = |a: &Rational| solve_fixed_alpha_with(&terms, a).map(|o| (a.clone(), o.value));
    #[cfg(feature = "parallel")]
    let points: Result<Vec<_>> = {
        use rayon::prelude::*;
        grid.par_iter().map(solve).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let points: Result<Vec<_>> = grid.iter().map(solve).collect();
    let points = points?;
    let (best_alpha, best_value) = points
        .iter()
        .min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
        .cloned()
        .expect("grid is nonempty");
    let reference_value = solve_fixed_alpha_with(&terms, &reference_point().0)?.value;
    let reference_not_beaten = points.iter().all(|(_, v)| reference_value <= *v);
    Ok(AlphaScan {
        points,
        best_alpha,
        best_value,
        reference_value,
        reference_not_beaten,
    })
}

/// A term written as `n^{..} D^{..} E^{..}`, each exponent `x0 + x1·α`.
struct MonomialForm {
    source: &'static str,
    n: (&'static str, &'static str),
    d: (&'static str, &'static str),
    e: (&'static str, &'static str),
}

impl MonomialForm {
    fn polynomial(&self) -> ExponentTerm {
        term(self.source, [self.n.0, self.n.1, self.d.0, self.e.0, self.d.1, self.e.1])
    }
}

/// Terms expected to attain the optimum at `α = 5/17`, as monomials in
/// `n`, `D = n^β`, `E = n^δ`.
fn expected_tight_monomials() -> Vec<MonomialForm> {
    let m = |source, n, d, e| MonomialForm { source, n, d, e };
    vec![
        m("spheresToCircles", ("1", "0"), ("2", "0"), ("0", "0")),
        m("caseB1", ("24/11", "-8/11"), ("-27/11", "12/11"), ("0", "24/11")),
        m("caseB1", ("2", "-2/3"), ("-2", "1"), ("2/3", "2")),
        m("caseB2", ("114/55", "8/55"), ("-27/11", "-12/55"), ("12/55", "-24/55")),
        m("caseB2", ("28/15", "2/5"), ("-2", "-3/5"), ("14/15", "-6/5")),
        m("caseC", ("2", "-2/3"), ("-2", "1"), ("2/3", "2")),
        m("caseC", ("3", "-1"), ("-9/2", "3/2"), ("-3", "3")),
    ]
}

/// Comparison of the certificate's tight set against the expected list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub tight_labels: Vec<String>,
    /// Tight labels grouped by polynomial identity.
    pub tight_classes: Vec<Vec<String>>,
    /// Expected terms grouped the same way (by source name).
    pub expected_classes: Vec<Vec<String>>,
    pub excluded_checked: Vec<String>,
}

fn group_by_polynomial(terms: &[ExponentTerm]) -> Vec<(ExponentTerm, Vec<String>)> {
    let mut groups: Vec<(ExponentTerm, Vec<String>)> = Vec::new();
    for t in terms {
        match groups.iter_mut().find(|(p, _)| p.same_polynomial(t)) {
            Some((_, labels)) => labels.push(t.label.clone()),
            None => groups.push((t.clone(), vec![t.label.clone()])),
        }
    }
    groups
}

/// Checks that the tight set equals the expected list up to terms that
/// coincide as polynomials.
pub fn tightness_report(cert: &OptimumCertificate) -> Result<TightnessReport> {
    let table = term_table();
    if !cert.is_valid(&table) {
        return Err(Error::TightSetMismatch("certificate is not valid for the table".into()));
    }
    let tight: Vec<ExponentTerm> =
        table.iter().filter(|t| cert.tight_labels.contains(&t.label)).cloned().collect();
    let observed = group_by_polynomial(&tight);
    let expected_terms: Vec<ExponentTerm> = expected_tight_monomials().iter().map(|m| m.polynomial()).collect();
    let expected = group_by_polynomial(&expected_terms);
    let missing: Vec<String> = expected
        .iter()
        .filter(|(p, _)| !observed.iter().any(|(q, _)| q.same_polynomial(p)))
        .map(|(_, l)| l.join("/"))
        .collect();
    let extra: Vec<String> = observed
        .iter()
        .filter(|(p, _)| !expected.iter().any(|(q, _)| q.same_polynomial(p)))
        .map(|(_, l)| l.join("/"))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::TightSetMismatch(format!("missing {missing:?}, unexpected {extra:?}")));
    }
    let excluded_checked = table
        .iter()
        .filter(|t| !cert.tight_labels.contains(&t.label))
        .map(|t| t.label.clone())
        .collect();
    Ok(TightnessReport {
        tight_labels: cert.tight_labels.clone(),
        tight_classes: observed.into_iter().map(|(_, l)| l).collect(),
        expected_classes: expected.into_iter().map(|(_, l)| l).collect(),
        excluded_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(t: &'a [ExponentTerm], label: &str) -> &'a ExponentTerm {
        t.iter().find(|x| x.label == label).unwrap()
    }

    #[test]
    fn table_shape() {
        let t = term_table();
        assert_eq!(t.len(), 26);
        let two_minus_3b = find(&t, "spheresToCircles-2");
        assert_eq!(t.iter().filter(|x| x.same_polynomial(two_minus_3b)).count(), 5);
        let labels: std::collections::HashSet<_> = t.iter().map(|x| &x.label).collect();
        assert_eq!(labels.len(), 26);
        assert_eq!(find(&t, "caseA1").c0, r("65/44"));
        let s = find(&t, "spheresToCircles-1");
        assert_eq!((s.c0.clone(), s.beta.clone()), (r("1"), r("2")));
        let c5 = find(&t, "caseC-5");
        assert_eq!(
            c5.coefficients().map(|c| c.to_string()),
            ["3", "-1", "-9/2", "-3", "3/2", "3"]
        );
        assert!(find(&t, "caseC-2").same_polynomial(find(&t, "caseB1-2")));
    }

    #[test]
    fn evaluate_at_reference() {
        let t = term_table();
        let (a, b, d) = reference_point();
        assert_eq!(find(&t, "spheresToCircles-1").eval(&a, &b, &d), r("295/197"));
        assert_eq!(find(&t, "caseC-5").eval(&a, &b, &d), r("295/197"));
        let ev = evaluate_all(&t, &a, &b, &d);
        assert_eq!(ev.max, reference_value());
        assert!(!ev.argmax.contains(&"caseA1".to_string()));
        // 65/44 < 295/197 since 65·197 < 295·44
        assert!(65 * 197 < 295 * 44);
        let z = Rational::zero();
        assert_eq!(find(&t, "spheresToCircles-2").eval(&z, &z, &z), r("2"));
    }

    #[test]
    fn reference_point_is_feasible() {
        let (a, b, d) = reference_point();
        assert!(check_alpha(&a).is_ok());
        assert!(b <= r("1/3"));
        assert!(d <= r("1/3") - &b / r("2"));
    }

    #[test]
    fn solve_at_reference_alpha() {
        let opt = solve_fixed_alpha(&r("5/17")).unwrap();
        assert_eq!(opt.beta, r("49/197"));
        assert_eq!(opt.delta, r("37/394"));
        assert_eq!(opt.value, r("295/197"));
    }

    #[test]
    fn alpha_range_checked() {
        assert!(matches!(solve_fixed_alpha(&r("-1/3")), Err(Error::OutOfRange(_))));
        assert!(matches!(solve_fixed_alpha(&r("2/3")), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn origin_is_feasible_and_bounds_value() {
        let t = term_table();
        let z = Rational::zero();
        let at_origin = evaluate_all(&t, &z, &z, &z).max;
        assert!(at_origin >= r("8/3"));
        let opt = solve_fixed_alpha(&z).unwrap();
        assert!(opt.value <= at_origin);
    }

    #[test]
    fn one_plus_alpha_bounds_value() {
        let opt = solve_fixed_alpha(&r("1/2")).unwrap();
        assert!(opt.value >= r("3/2"));
    }

    #[test]
    fn certificate_and_tightness() {
        let cert = certificate(&r("5/17")).unwrap();
        assert!(cert.is_valid(&term_table()));
        assert!(cert.tight_labels.contains(&"spheresToCircles-1".to_string()));
        assert!(cert.tight_labels.contains(&"caseB2-1".to_string()));
        let rep = tightness_report(&cert).unwrap();
        assert_eq!(rep.tight_classes.len(), 6);
        assert!(rep.excluded_checked.contains(&"caseA1".to_string()));
    }

    #[test]
    fn tightness_mismatch_detected() {
        let cert = certificate(&r("0")).unwrap();
        assert!(matches!(tightness_report(&cert), Err(Error::TightSetMismatch(_))));
        let mut bad = certificate(&r("5/17")).unwrap();
        bad.tight_labels.pop();
        assert!(matches!(tightness_report(&bad), Err(Error::TightSetMismatch(_))));
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = alpha_grid(&r("1/10")).unwrap();
        assert_eq!(g.first(), Some(&r("0")));
        assert_eq!(g.last(), Some(&r("1/2")));
        assert_eq!(g.len(), 6);
        assert_eq!(alpha_grid(&r("1/3")).unwrap(), vec![r("0"), r("1/3"), r("1/2")]);
        assert!(alpha_grid(&r("0")).is_err());
    }

    #[test]
    fn coarse_scan() {
        let s = scan_alpha(&r("5/17")).unwrap();
        assert_eq!(s.points.len(), 3);
        assert_eq!(s.points[1], (r("5/17"), r("295/197")));
        assert_eq!(s.reference_value, r("295/197"));
        assert!(s.reference_not_beaten);
        assert_eq!(s.best_value, r("295/197"));
    }
}
