//! Closed-form values and bounds for zero-sum invariants.
//!
//! Every formula reports whether its hypotheses hold. An inapplicable formula
//! carries a reason instead of a value, so a verifier can tell "formula
//! wrong" from "formula not applicable".

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{prime_power_decomposition, AbelianGroup};
use crate::spec::LengthSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not applicable: {0}")]
pub struct Inapplicable(pub String);

/// Which invariant a formula speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Davenport,
    Eta,
    Egz,
    Multiples,
    Zeta(u32),
    EtaI(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    Exact(u64),
    /// `hi = None` means unbounded above.
    Interval { lo: u64, hi: Option<u64> },
}

impl Estimate {
    pub fn contains(&self, v: u64) -> bool {
        match *self {
            Estimate::Exact(x) => x == v,
            Estimate::Interval { lo, hi } => v >= lo && hi.map_or(true, |h| v <= h),
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match *self {
            Estimate::Exact(x) => Some(x),
            Estimate::Interval { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub name: String,
    pub quantity: Quantity,
    pub value: Option<Estimate>,
    pub reason: String,
}

impl FormulaValue {
    fn exact(name: &str, quantity: Quantity, v: u64, reason: impl Into<String>) -> Self {
        FormulaValue {
            name: name.to_string(),
            quantity,
            value: Some(Estimate::Exact(v)),
            reason: reason.into(),
        }
    }

    fn interval(name: &str, quantity: Quantity, lo: u64, hi: Option<u64>, reason: impl Into<String>) -> Self {
        assert!(hi.map_or(true, |h| lo <= h), "empty interval for {name}");
        FormulaValue {
            name: name.to_string(),
            quantity,
            value: Some(Estimate::Interval { lo, hi }),
            reason: reason.into(),
        }
    }

    fn inapplicable(name: &str, quantity: Quantity, reason: impl Into<String>) -> Self {
        FormulaValue {
            name: name.to_string(),
            quantity,
            value: None,
            reason: reason.into(),
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.value.is_some()
    }

    pub fn exact_value(&self) -> Option<u64> {
        self.value.and_then(|v| v.exact())
    }
}

/// `Σ (n_i - 1) + 1`
pub fn d_star(g: &AbelianGroup) -> u64 {
    g.factors().iter().map(|n| n - 1).sum::<u64>() + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank2 {
    pub s: u64,
    pub eta: u64,
}

/// `s(C_{n1} ⊕ C_{n2}) = 2n1 + 2n2 - 3` and `η = 2n1 + n2 - 2`, for `n1 | n2`.
pub fn cf_rank2(n1: u64, n2: u64) -> Result<Rank2, Inapplicable> {
    if n1 == 0 || n2 == 0 || n2 % n1 != 0 {
        return Err(Inapplicable(format!("{n1} does not divide {n2}")));
    }
    Ok(Rank2 {
        s: 2 * n1 + 2 * n2 - 3,
        eta: 2 * n1 + n2 - 2,
    })
}

/// `(n1, n2)` with `G = C_{n1} ⊕ C_{n2}`, padding with trivial factors.
pub fn rank2_parameters(g: &AbelianGroup) -> Option<(u64, u64)> {
    match g.factors() {
        [] => Some((1, 1)),
        [n] => Some((1, *n)),
        [a, b] => Some((*a, *b)),
        _ => None,
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && prime_power_decomposition(p) == [(p, p)]
}

/// Exact values for a p-group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupForms {
    pub davenport: FormulaValue,
    pub multiples: FormulaValue,
    /// `zeta[i - 1]` is the value for `ζ_i`, `i` in `[1, n]`.
    pub zeta: Vec<FormulaValue>,
    pub eta: FormulaValue,
    /// `η_i` for the `i` covered by the large-exponent result; empty when
    /// `D(G) > 2n - 1`.
    pub eta_i: Vec<FormulaValue>,
}

impl PGroupForms {
    pub fn eta_i_value(&self, i: u32) -> Option<u64> {
        self.eta_i
            .iter()
            .find(|f| f.quantity == Quantity::EtaI(i))
            .and_then(FormulaValue::exact_value)
    }
}

pub fn large_exponent(g: &AbelianGroup) -> bool {
    d_star(g) < 2 * g.exponent()
}

pub fn cf_pgroup(g: &AbelianGroup, p: u64) -> Result<PGroupForms, Inapplicable> {
    if !is_prime(p) {
        return Err(Inapplicable(format!("{p} is not prime")));
    }
    if !g.is_p_group_for(p) {
        return Err(Inapplicable(format!("{g} is not a {p}-group")));
    }
    let d = d_star(g);
    let n = g.exponent();
    let davenport = FormulaValue::exact("olson", Quantity::Davenport, d, "p-group: D = D*");
    let multiples = FormulaValue::exact("multiples", Quantity::Multiples, d + n - 1, "p-group: s_{nN} = D + n - 1");
    let zeta = (1..=n)
        .map(|i| {
            FormulaValue::exact("zeta-values", Quantity::Zeta(i as u32), d + i - 1, "p-group: zeta_i = D + i - 1")
        })
        .collect();
    let (eta, eta_i) = if d < 2 * n {
        let eta = FormulaValue::exact(
            "large-exponent-eta",
            Quantity::Eta,
            2 * d - n,
            "p-group with D <= 2n - 1: eta = 2D - n",
        );
        let top = (2 * n - d).max(n / 2 + 1).min(n);
        let eta_i = (1..=top)
            .map(|i| {
                FormulaValue::exact(
                    "large-exponent-eta-i",
                    Quantity::EtaI(i as u32),
                    2 * d - n + i - 1,
                    format!("p-group with D <= 2n - 1, i <= {top}: eta_i = 2D - n + i - 1"),
                )
            })
            .collect();
        (eta, eta_i)
    } else {
        let reason = format!("D = {d} exceeds 2n - 1 = {}", 2 * n - 1);
        (
            FormulaValue::inapplicable("large-exponent-eta", Quantity::Eta, reason),
            Vec::new(),
        )
    };
    Ok(PGroupForms {
        davenport,
        multiples,
        zeta,
        eta,
        eta_i,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionForms {
    pub group: AbelianGroup,
    pub davenport: FormulaValue,
    pub eta: FormulaValue,
}

/// Values for `G' = C_a ⊕ G` with `G` a p-group of large exponent.
///
/// `D(G')` is computed as `D*(G')` after normalization, which needs no
/// coprimality; `η(G') = 2D(G') - exp(G')` additionally needs `p ∤ a`.
pub fn cf_extension(a: u64, g: &AbelianGroup, p: u64) -> Result<ExtensionForms, Inapplicable> {
    if a == 0 {
        return Err(Inapplicable("a must be positive".into()));
    }
    if !is_prime(p) || !g.is_p_group_for(p) {
        return Err(Inapplicable(format!("{g} is not a {p}-group")));
    }
    let (d, n) = (d_star(g), g.exponent());
    if d >= 2 * n {
        return Err(Inapplicable(format!("D = {d} exceeds 2n - 1 = {}", 2 * n - 1)));
    }
    let extended = if a == 1 {
        g.clone()
    } else {
        let mut factors = vec![a];
        factors.extend_from_slice(g.factors());
        AbelianGroup::new(&factors).map_err(|e| Inapplicable(e.to_string()))?
    };
    let d_ext = d_star(&extended);
    let davenport = FormulaValue::exact("near-d", Quantity::Davenport, d_ext, "C_a + large-exponent p-group: D = D*");
    let eta = if a % p != 0 {
        FormulaValue::exact(
            "extension-eta",
            Quantity::Eta,
            2 * d_ext - extended.exponent(),
            format!("p = {p} does not divide a = {a}: eta = 2D - exp"),
        )
    } else {
        FormulaValue::inapplicable("extension-eta", Quantity::Eta, format!("p = {p} divides a = {a}"))
    };
    Ok(ExtensionForms {
        group: extended,
        davenport,
        eta,
    })
}

/// `(p, a, P)` with `G = C_a ⊕ P`, `P` the Sylow p-subgroup of large
/// exponent and `C_a` cyclic and nontrivial, for the least such prime `p`.
pub fn extension_split(g: &AbelianGroup) -> Option<(u64, u64, AbelianGroup)> {
    prime_power_decomposition(g.order()).into_iter().find_map(|(p, _)| {
        let mut sylow = Vec::new();
        let mut rest = Vec::new();
        for &f in g.factors() {
            let mut q = 1;
            let mut m = f;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            if q > 1 {
                sylow.push(q);
            }
            if m > 1 {
                rest.push(m);
            }
        }
        let rest = AbelianGroup::new(&rest).ok()?;
        if rest.rank() != 1 {
            return None;
        }
        let sylow = AbelianGroup::new(&sylow).ok()?;
        large_exponent(&sylow).then(|| (p, rest.order(), sylow))
    })
}

impl Quantity {
    /// The named invariant computed by `spec`, if any.
    pub fn from_spec(spec: &LengthSpec, n: u64) -> Option<Quantity> {
        let n = u32::try_from(n).ok()?;
        match *spec {
            LengthSpec::All => Some(Quantity::Davenport),
            LengthSpec::Range(1, b) if b == n => Some(Quantity::Eta),
            LengthSpec::Range(i, b) if b == n => Some(Quantity::EtaI(i)),
            LengthSpec::Exact(k) if k == n => Some(Quantity::Egz),
            LengthSpec::Multiples => Some(Quantity::Multiples),
            LengthSpec::ResidueUpFrom(i) if i == 1 => Some(Quantity::Davenport),
            LengthSpec::ResidueUpFrom(i) => Some(Quantity::Zeta(i)),
            _ => None,
        }
    }
}

/// Every applicable closed form for `q` on `g`: p-group values, rank-2
/// values, the `C_a ⊕ P` extension, and the `D*` lower bound for `D`.
pub fn predictions(g: &AbelianGroup, q: Quantity) -> Vec<FormulaValue> {
    let mut out = Vec::new();
    if let Some(forms) = g.p_group_prime().and_then(|p| cf_pgroup(g, p).ok()) {
        let mut all = vec![forms.davenport, forms.multiples, forms.eta];
        all.extend(forms.zeta);
        all.extend(forms.eta_i);
        out.extend(all.into_iter().filter(|f| f.quantity == q && f.is_applicable()));
    }
    if let Some(r) = rank2_parameters(g).and_then(|(a, b)| cf_rank2(a, b).ok()) {
        let (a, b) = rank2_parameters(g).expect("checked");
        match q {
            Quantity::Eta => out.push(FormulaValue::exact(
                "rank-2",
                q,
                r.eta,
                format!("eta(C_{a} + C_{b}) = 2n1 + n2 - 2"),
            )),
            Quantity::Egz => out.push(FormulaValue::exact(
                "rank-2",
                q,
                r.s,
                format!("s(C_{a} + C_{b}) = 2n1 + 2n2 - 3"),
            )),
            _ => {}
        }
    }
    if g.p_group_prime().is_none() {
        if let Some(forms) = extension_split(g).and_then(|(p, a, sylow)| cf_extension(a, &sylow, p).ok()) {
            out.extend([forms.davenport, forms.eta].into_iter().filter(|f| f.quantity == q && f.is_applicable()));
        }
    }
    if q == Quantity::Davenport {
        out.push(FormulaValue::interval("d-star", q, d_star(g), None, "D*(G) <= D(G)"));
    }
    out
}

/// Numeric inputs for [`bounds_eta`]. Hypothesis flags are supplied by the
/// caller; a bound whose flag is false is omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundsInput {
    pub davenport: u64,
    pub exponent: u64,
    pub order: Option<u64>,
    /// p odd, G a p-group, D <= 2n - 1.
    pub odd_p_large_exponent: bool,
    pub complement: Option<ComplementData>,
    pub quotient: Option<QuotientData>,
}

/// `G = C_n ⊕ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementData {
    /// Any lower bound for `D(H)` keeps the bound valid.
    pub davenport_h: u64,
    pub exp_h_divides_n: bool,
}

/// A subgroup `H` with `exp(G) = exp(H) exp(G/H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub eta_h: u64,
    pub eta_q: u64,
    pub exp_q: u64,
    pub exponent_splits: bool,
}

/// Interval constraints on `η(G)` and `s(G)`; callers intersect them.
pub fn bounds_eta(input: &BoundsInput) -> Vec<FormulaValue> {
    let (d, n) = (input.davenport, input.exponent);
    let mut out = vec![
        FormulaValue::interval(
            "general-chain",
            Quantity::Eta,
            d,
            input.order,
            "D <= eta <= s - n + 1 <= |G|",
        ),
        FormulaValue::interval(
            "general-chain",
            Quantity::Egz,
            d + n - 1,
            input.order.map(|o| o + n - 1),
            "D <= eta <= s - n + 1 <= |G|",
        ),
    ];
    if input.odd_p_large_exponent {
        out.push(FormulaValue::interval(
            "odd-p-chain",
            Quantity::Eta,
            (2 * d).saturating_sub(n),
            Some(d + n - 1),
            "2D - 1 <= eta + n - 1 <= s <= D + 2n - 2",
        ));
        out.push(FormulaValue::interval(
            "odd-p-chain",
            Quantity::Egz,
            (2 * d).saturating_sub(1),
            Some(d + 2 * n - 2),
            "2D - 1 <= eta + n - 1 <= s <= D + 2n - 2",
        ));
    }
    if let Some(c) = &input.complement {
        if c.exp_h_divides_n {
            out.push(FormulaValue::interval(
                "complement-lower-bound",
                Quantity::Eta,
                2 * c.davenport_h.saturating_sub(1) + n,
                None,
                "G = C_n + H, exp(H) | n: eta >= 2(D(H) - 1) + n",
            ));
        }
    }
    if let Some(q) = &input.quotient {
        if q.exponent_splits {
            out.push(FormulaValue::interval(
                "inductive-upper-bound",
                Quantity::Eta,
                0,
                Some(q.eta_h.saturating_sub(1) * q.exp_q + q.eta_q),
                "exp(G) = exp(H) exp(G/H): eta <= (eta(H) - 1) exp(G/H) + eta(G/H)",
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    #[test]
    fn prediction_lookup() {
        let eta = |f: &[u64]| {
            predictions(&g(f), Quantity::Eta)
                .iter()
                .filter_map(FormulaValue::exact_value)
                .collect::<Vec<_>>()
        };
        assert_eq!(eta(&[3, 9]), vec![13, 13]);
        assert_eq!(eta(&[2, 4]), vec![6, 6]);
        assert_eq!(eta(&[2, 12]), vec![14, 14]);
        assert_eq!(eta(&[6]), vec![6, 6]);
        assert!(eta(&[2, 2, 6]).is_empty());
        assert_eq!(extension_split(&g(&[2, 12])).map(|(p, a, _)| (p, a)), Some((2, 3)));
        assert_eq!(Quantity::from_spec(&LengthSpec::Range(3, 8), 8), Some(Quantity::EtaI(3)));
        assert_eq!(Quantity::from_spec(&LengthSpec::Exact(3), 8), None);
    }

    #[test]
    fn d_star_values() {
        assert_eq!(d_star(&g(&[3, 3])), 5);
        assert_eq!(d_star(&g(&[2, 2, 4])), 6);
        assert_eq!(d_star(&AbelianGroup::trivial()), 1);
    }

    #[test]
    fn rank2_values() {
        assert_eq!(cf_rank2(3, 3).unwrap(), Rank2 { s: 9, eta: 7 });
        assert_eq!(cf_rank2(1, 5).unwrap(), Rank2 { s: 9, eta: 5 });
        assert_eq!(cf_rank2(2, 4).unwrap(), Rank2 { s: 9, eta: 6 });
        assert!(cf_rank2(2, 5).is_err());
    }

    #[test]
    fn pgroup_bundle() {
        let f = cf_pgroup(&g(&[2, 4]), 2).unwrap();
        assert_eq!(f.davenport.exact_value(), Some(5));
        assert_eq!(f.multiples.exact_value(), Some(8));
        assert_eq!(f.zeta[2].exact_value(), Some(7));
        assert_eq!(f.eta.exact_value(), Some(6));
        assert_eq!(f.eta_i.len(), 3);
        assert_eq!(f.eta_i_value(3), Some(8));

        let f = cf_pgroup(&g(&[3, 9]), 3).unwrap();
        assert_eq!((f.davenport.exact_value(), f.eta.exact_value()), (Some(11), Some(13)));

        let f = cf_pgroup(&g(&[3, 3, 3]), 3).unwrap();
        assert_eq!(f.davenport.exact_value(), Some(7));
        assert!(!f.eta.is_applicable());
        assert!(f.eta_i.is_empty());

        assert!(cf_pgroup(&g(&[6]), 2).is_err());
        assert!(cf_pgroup(&g(&[4]), 4).is_err());
    }

    #[test]
    fn pgroup_internal_consistency() {
        for (f, p) in [(&[2u64, 4][..], 2), (&[9], 3), (&[3, 3], 3), (&[2, 2, 8], 2), (&[5, 25], 5)] {
            let grp = g(f);
            let b = cf_pgroup(&grp, p).unwrap();
            let n = grp.exponent() as usize;
            assert_eq!(b.zeta[0].exact_value(), b.davenport.exact_value());
            assert_eq!(b.zeta[n - 1].exact_value(), b.multiples.exact_value());
            if b.eta.is_applicable() {
                assert_eq!(b.eta_i_value(1), b.eta.exact_value());
            }
        }
    }

    #[test]
    fn extension_values() {
        let e = cf_extension(3, &g(&[2, 4]), 2).unwrap();
        assert_eq!(e.group, g(&[2, 12]));
        assert_eq!(e.davenport.exact_value(), Some(13));
        assert_eq!(e.eta.exact_value(), Some(14));
        assert_eq!(e.eta.exact_value(), Some(cf_rank2(2, 12).unwrap().eta));

        let e = cf_extension(2, &g(&[3, 9]), 3).unwrap();
        assert_eq!(e.davenport.exact_value(), Some(20));
        assert_eq!(e.eta.exact_value(), Some(22));

        let e = cf_extension(2, &g(&[2, 4]), 2).unwrap();
        assert!(e.davenport.is_applicable());
        assert!(!e.eta.is_applicable());

        assert!(cf_extension(3, &g(&[3, 3, 3]), 3).is_err());
    }

    #[test]
    fn extension_degenerates_to_pgroup() {
        for (f, p) in [(&[2u64, 4][..], 2), (&[3, 9], 3), (&[8], 2), (&[5, 5], 5)] {
            let grp = g(f);
            let e = cf_extension(1, &grp, p).unwrap();
            let b = cf_pgroup(&grp, p).unwrap();
            assert_eq!(e.davenport.exact_value(), b.davenport.exact_value());
            assert_eq!(e.eta.exact_value(), b.eta.exact_value());
        }
    }

    #[test]
    fn bounds() {
        let out = bounds_eta(&BoundsInput {
            davenport: 11,
            exponent: 9,
            order: Some(27),
            odd_p_large_exponent: true,
            complement: Some(ComplementData {
                davenport_h: 3,
                exp_h_divides_n: true,
            }),
            quotient: Some(QuotientData {
                eta_h: 3,
                eta_q: 9,
                exp_q: 9,
                exponent_splits: true,
            }),
        });
        let get = |name: &str, q: Quantity| {
            out.iter()
                .find(|f| f.name == name && f.quantity == q)
                .and_then(|f| f.value)
                .unwrap()
        };
        assert_eq!(get("odd-p-chain", Quantity::Eta), Estimate::Interval { lo: 13, hi: Some(19) });
        assert_eq!(get("odd-p-chain", Quantity::Egz), Estimate::Interval { lo: 21, hi: Some(27) });
        assert_eq!(get("complement-lower-bound", Quantity::Eta), Estimate::Interval { lo: 13, hi: None });
        assert_eq!(
            get("inductive-upper-bound", Quantity::Eta),
            Estimate::Interval { lo: 0, hi: Some(2 * 9 + 9) }
        );

        let out = bounds_eta(&BoundsInput {
            davenport: 5,
            exponent: 4,
            ..Default::default()
        });
        assert_eq!(out.len(), 2);
    }
}
