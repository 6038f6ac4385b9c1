//! Exact brute-force model of the level-2 combinatorics on F₂³ × F₂³.
//!
//! Labels are packed into 6-bit integers: bits 0..2 hold eps, bits 3..5 hold
//! del. The quadratic form is q(θ) = eps·del mod 2; odd labels (q = 1)
//! correspond to bitangents. Every combinatorial constant used elsewhere in
//! the crate (the azygetic intersection size, the pair statistic threshold,
//! the Aronhold count) is computed here by exhaustive enumeration, never
//! hard-coded without a cross-check.

use crate::{Error, Result};

/// Element of F₂³ × F₂³ packed into the low 6 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaLabel(pub u8);

/// Nonzero element of F₂⁶ (a 2-torsion class).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTorsion(pub u8);

impl ThetaLabel {
    pub fn eps(self) -> u8 {
        self.0 & 0b111
    }

    pub fn del(self) -> u8 {
        (self.0 >> 3) & 0b111
    }

    /// Parity of the quadratic form eps·del.
    pub fn parity(self) -> u8 {
        ((self.eps() & self.del()).count_ones() & 1) as u8
    }

    pub fn is_odd(self) -> bool {
        self.parity() == 1
    }

    pub fn add(self, v: TwoTorsion) -> ThetaLabel {
        ThetaLabel(self.0 ^ v.0)
    }
}

impl TwoTorsion {
    pub fn new(v: u8) -> Result<Self> {
        if v == 0 || v > 63 {
            return Err(Error::InvalidInput("two-torsion element must be 1..=63".into()));
        }
        Ok(TwoTorsion(v))
    }

    pub fn eps(self) -> u8 {
        self.0 & 0b111
    }

    pub fn del(self) -> u8 {
        (self.0 >> 3) & 0b111
    }

    /// q extended to all of F₂⁶ by the same formula.
    pub fn parity(self) -> u8 {
        ((self.eps() & self.del()).count_ones() & 1) as u8
    }

    pub fn add(self, other: TwoTorsion) -> Option<TwoTorsion> {
        let v = self.0 ^ other.0;
        if v == 0 {
            None
        } else {
            Some(TwoTorsion(v))
        }
    }
}

/// Weil pairing ⟨u, v⟩ = u.eps·v.del + u.del·v.eps mod 2.
pub fn weil(u: TwoTorsion, v: TwoTorsion) -> u8 {
    weil_raw(u.0, v.0)
}

fn weil_raw(u: u8, v: u8) -> u8 {
    let ue = u & 0b111;
    let ud = (u >> 3) & 0b111;
    let ve = v & 0b111;
    let vd = (v >> 3) & 0b111;
    (((ue & vd).count_ones() + (ud & ve).count_ones()) & 1) as u8
}

/// All 28 odd labels, ascending.
pub fn odd_labels() -> Vec<ThetaLabel> {
    (0u8..64).map(ThetaLabel).filter(|t| t.is_odd()).collect()
}

/// All 63 nonzero two-torsion classes, ascending.
pub fn two_torsion_classes() -> Vec<TwoTorsion> {
    (1u8..64).map(TwoTorsion).collect()
}

/// The 12-tuple θ(γ): odd labels θ with θ+γ odd, paired by θ ↔ θ+γ.
#[derive(Debug, Clone)]
pub struct Tuple12 {
    pub gamma: TwoTorsion,
    pub members: Vec<ThetaLabel>,
    pub pairs: Vec<(ThetaLabel, ThetaLabel)>,
}

/// Bitmask over the 64 labels with the odd members of θ(γ) set.
pub fn tuple_mask(gamma: TwoTorsion) -> u64 {
    let mut mask = 0u64;
    for t in 0u8..64 {
        let th = ThetaLabel(t);
        if th.is_odd() && th.add(gamma).is_odd() {
            mask |= 1u64 << t;
        }
    }
    mask
}

pub fn tuple12(gamma: TwoTorsion) -> Result<Tuple12> {
    let mut members = Vec::with_capacity(12);
    for t in 0u8..64 {
        let th = ThetaLabel(t);
        if th.is_odd() && th.add(gamma).is_odd() {
            members.push(th);
        }
    }
    // second characterization: odd θ with ⟨θ_vec, γ⟩ = parity(γ)
    for t in 0u8..64 {
        let th = ThetaLabel(t);
        if !th.is_odd() {
            continue;
        }
        let in_tuple = members.contains(&th);
        let by_pairing = weil_raw(th.0, gamma.0) == gamma.parity();
        if in_tuple != by_pairing {
            return Err(Error::InconsistentStructure(
                "tuple characterizations disagree".into(),
            ));
        }
    }
    if members.len() != 12 {
        return Err(Error::InconsistentStructure(format!(
            "tuple of size {}, expected 12",
            members.len()
        )));
    }
    let mut pairs = Vec::with_capacity(6);
    let mut seen = 0u64;
    for &m in &members {
        if seen & (1 << m.0) != 0 {
            continue;
        }
        let partner = m.add(gamma);
        pairs.push((m, partner));
        seen |= (1 << m.0) | (1 << partner.0);
    }
    debug_assert_eq!(pairs.len(), 6);
    Ok(Tuple12 {
        gamma,
        members,
        pairs,
    })
}

/// |θ(g1) ∩ θ(g2)| for distinct nonzero g1, g2.
pub fn intersection_size(g1: TwoTorsion, g2: TwoTorsion) -> Result<u32> {
    if g1 == g2 {
        return Err(Error::InvalidInput("intersection needs distinct classes".into()));
    }
    Ok((tuple_mask(g1) & tuple_mask(g2)).count_ones())
}

/// Orbit sizes of Jac[2]/α under the stabilizer of α: {0}, (α^⊥/α)∖{0} and
/// the complement — (1, 15, 16). Also verifies that {qᵢ,qⱼ} ↦ qᵢ−qⱼ from
/// pairs of the 6 classes of θ(α)/α is a bijection onto the 15-orbit, and
/// fixes the orientation of the pulled-back Weil pairing (1 exactly when the
/// index pairs share an element).
pub fn orbit_sizes(alpha: TwoTorsion) -> Result<(usize, usize, usize)> {
    // classes of F2^6 / <alpha>: represent each class by its smaller element
    let mut reps = Vec::new();
    let mut seen = [false; 64];
    for v in 0u8..64 {
        if seen[v as usize] {
            continue;
        }
        seen[v as usize] = true;
        seen[(v ^ alpha.0) as usize] = true;
        reps.push(v);
    }
    debug_assert_eq!(reps.len(), 32);
    let mut zero = 0usize;
    let mut perp = 0usize;
    let mut rest = 0usize;
    for &r in &reps {
        if r == 0 || r == alpha.0 {
            zero += 1;
        } else if weil_raw(r, alpha.0) == 0 {
            perp += 1;
        } else {
            rest += 1;
        }
    }
    // the pair-difference map onto the 15-element orbit
    let t = tuple12(alpha)?;
    let q: Vec<ThetaLabel> = t.pairs.iter().map(|&(a, _)| a).collect(); // class reps of Σ/i
    debug_assert_eq!(q.len(), 6);
    let mut image = std::collections::HashSet::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            let d = q[i].0 ^ q[j].0; // difference class in F2^6 / alpha
            let class = d.min(d ^ alpha.0);
            if d == 0 || d == alpha.0 {
                return Err(Error::InconsistentStructure("pair difference trivial".into()));
            }
            if weil_raw(d, alpha.0) != 0 {
                return Err(Error::InconsistentStructure(
                    "pair difference outside alpha-perp".into(),
                ));
            }
            image.insert(class);
        }
    }
    if image.len() != 15 || perp != 15 {
        return Err(Error::InconsistentStructure(format!(
            "pair-difference image has {} classes, perp orbit {}",
            image.len(),
            perp
        )));
    }
    // orientation law: ⟨qi−qj, qk−ql⟩ = 1 iff {i,j} ∩ {k,l} ≠ ∅
    for i in 0..6 {
        for j in (i + 1)..6 {
            for k in 0..6 {
                for l in (k + 1)..6 {
                    if (i, j) == (k, l) {
                        continue;
                    }
                    let d1 = q[i].0 ^ q[j].0;
                    let d2 = q[k].0 ^ q[l].0;
                    let overlap = i == k || i == l || j == k || j == l;
                    let pairing = weil_raw(d1, d2);
                    if (pairing == 1) != overlap {
                        return Err(Error::InconsistentStructure(
                            "pairing-vs-overlap orientation violated".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok((zero, perp, rest))
}

/// Number of γ′ ∈ γ^⊥ ∖ {0, γ} whose tuple contains both a and b.
///
/// The value separates true γ-pairs from non-pairs; the separating constants
/// are exported by [`model_constants`].
pub fn pair_statistic(t: &Tuple12, a: ThetaLabel, b: ThetaLabel) -> Result<u32> {
    if a == b || !t.members.contains(&a) || !t.members.contains(&b) {
        return Err(Error::InvalidInput(
            "pair statistic needs two distinct members of the tuple".into(),
        ));
    }
    let gamma = t.gamma;
    let mask = (1u64 << a.0) | (1u64 << b.0);
    let mut count = 0u32;
    for g in two_torsion_classes() {
        if g == gamma || weil(g, gamma) != 0 {
            continue;
        }
        if tuple_mask(g) & mask == mask {
            count += 1;
        }
    }
    Ok(count)
}

/// A 7-set of odd labels is Aronhold iff every 3-subset is azygetic: the
/// vector sum of each triple is an even label.
pub fn is_aronhold(set: &[ThetaLabel]) -> bool {
    debug_assert_eq!(set.len(), 7);
    for i in 0..7 {
        for j in (i + 1)..7 {
            for k in (j + 1)..7 {
                let s = ThetaLabel(set[i].0 ^ set[j].0 ^ set[k].0);
                if s.is_odd() {
                    return false;
                }
            }
        }
    }
    true
}

/// All Aronhold 7-subsets of the odd labels; the count is 288.
pub fn aronhold_sets() -> Vec<[ThetaLabel; 7]> {
    let odd = odd_labels();
    let mut out = Vec::new();
    let mut idx = [0usize; 7];
    // lexicographic enumeration of 7-subsets of 28
    for i in 0..7 {
        idx[i] = i;
    }
    loop {
        let set = [
            odd[idx[0]], odd[idx[1]], odd[idx[2]], odd[idx[3]], odd[idx[4]], odd[idx[5]],
            odd[idx[6]],
        ];
        if is_aronhold(&set) {
            out.push(set);
        }
        // advance
        let mut i = 6usize;
        loop {
            if idx[i] < 28 - (7 - i) {
                idx[i] += 1;
                for j in (i + 1)..7 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
            i -= 1;
        }
    }
}

/// Constants of the model, all recomputed by brute force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConstants {
    pub odd: usize,
    pub even: usize,
    pub two_torsion: usize,
    pub tuple_size: usize,
    pub sp6_order: u64,
    pub aronhold: usize,
    pub syz_intersection: u32,
    pub azy_intersection: u32,
    /// pair_statistic value attained by true γ-pairs
    pub v_pair: u32,
    /// pair_statistic value attained by co-members that are not a pair
    pub v_nonpair: u32,
    /// tuples through any fixed odd label
    pub tuples_per_label: u32,
    /// syzygetic / azygetic partner counts per class (off-diagonal row weights)
    pub syz_partners: u32,
    pub azy_partners: u32,
}

pub fn model_constants() -> Result<ModelConstants> {
    let odd = odd_labels();
    let even = (0u8..64).filter(|&t| !ThetaLabel(t).is_odd()).count();

    let classes = two_torsion_classes();
    let g1 = classes[0];
    let mut syz = None;
    let mut azy = None;
    let mut syz_partners = 0u32;
    let mut azy_partners = 0u32;
    for &g2 in &classes[1..] {
        let n = intersection_size(g1, g2)?;
        if weil(g1, g2) == 0 {
            syz_partners += 1;
            match syz {
                None => syz = Some(n),
                Some(v) if v == n => {}
                _ => return Err(Error::InconsistentStructure("syzygetic size not constant".into())),
            }
        } else {
            azy_partners += 1;
            match azy {
                None => azy = Some(n),
                Some(v) if v == n => {}
                _ => return Err(Error::InconsistentStructure("azygetic size not constant".into())),
            }
        }
    }
    let t = tuple12(g1)?;
    let (a, b) = t.pairs[0];
    let v_pair = pair_statistic(&t, a, b)?;
    let other = t
        .members
        .iter()
        .find(|&&m| m != a && m != b)
        .cloned()
        .unwrap();
    let v_nonpair = pair_statistic(&t, a, other)?;
    let tuples_per_label = classes
        .iter()
        .filter(|&&g| tuple_mask(g) & 1u64 << odd[0].0 != 0)
        .count() as u32;

    Ok(ModelConstants {
        odd: odd.len(),
        even,
        two_torsion: classes.len(),
        tuple_size: t.members.len(),
        sp6_order: 63 * 30 * 12 * 8 * 8,
        aronhold: aronhold_sets().len(),
        syz_intersection: syz.unwrap(),
        azy_intersection: azy.unwrap(),
        v_pair,
        v_nonpair,
        tuples_per_label,
        syz_partners,
        azy_partners,
    })
}

/// One law check of the self-test report.
#[derive(Debug, Clone)]
pub struct LawCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Structured report of all constants and law checks.
#[derive(Debug, Clone)]
pub struct SelfTestReport {
    pub constants: ModelConstants,
    pub checks: Vec<LawCheck>,
}

impl SelfTestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Run the full oracle suite. Exact integer identities, no tolerances.
pub fn selftest() -> Result<SelfTestReport> {
    let constants = model_constants()?;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool, detail: String| {
        checks.push(LawCheck { name, pass, detail });
    };

    push(
        "odd/even label counts",
        constants.odd == 28 && constants.even == 36,
        format!("odd={} even={}", constants.odd, constants.even),
    );
    push(
        "two-torsion count",
        constants.two_torsion == 63,
        format!("{}", constants.two_torsion),
    );

    // Weil pairing laws: alternating and bilinear, exhaustively
    let mut alternating = true;
    for v in 1u8..64 {
        if weil_raw(v, v) != 0 {
            alternating = false;
        }
    }
    let mut bilinear = true;
    for u in 1u8..64 {
        for v in 1u8..64 {
            for w in 1u8..64 {
                if weil_raw(u ^ v, w) != weil_raw(u, w) ^ weil_raw(v, w) {
                    bilinear = false;
                }
            }
        }
    }
    push("weil alternating", alternating, String::new());
    push("weil bilinear (63^3 exhaustive)", bilinear, String::new());
    push(
        "weil dual basis pair",
        weil_raw(0b000_001, 0b001_000) == 1,
        String::new(),
    );

    // tuples: size 12, 6 pairs, every odd pair in exactly one tuple
    let mut sizes_ok = true;
    let mut pair_cover = std::collections::HashMap::<(u8, u8), u32>::new();
    for g in two_torsion_classes() {
        let t = tuple12(g)?;
        if t.members.len() != 12 || t.pairs.len() != 6 {
            sizes_ok = false;
        }
        for &(a, b) in &t.pairs {
            let key = (a.0.min(b.0), a.0.max(b.0));
            *pair_cover.entry(key).or_insert(0) += 1;
        }
    }
    push("63 tuples of size 12 with 6 pairs", sizes_ok, String::new());
    let all_pairs_once =
        pair_cover.len() == 378 && pair_cover.values().all(|&v| v == 1);
    push(
        "378 odd pairs each in exactly one tuple (fiber size 6)",
        all_pairs_once,
        format!("covered {}", pair_cover.len()),
    );

    // intersection profile and its dependence on the pairing only
    let classes = two_torsion_classes();
    let mut profile_ok = true;
    let mut translate_ok = true;
    for (i, &g1) in classes.iter().enumerate() {
        for &g2 in &classes[i + 1..] {
            let n = intersection_size(g1, g2)?;
            let expected = if weil(g1, g2) == 0 {
                constants.syz_intersection
            } else {
                constants.azy_intersection
            };
            if n != expected {
                profile_ok = false;
            }
            if weil(g1, g2) == 0 {
                // the 4-point intersection is a translate of {0, g1, g2, g1+g2}
                let inter = tuple_mask(g1) & tuple_mask(g2);
                let x = inter.trailing_zeros() as u8;
                let grp = [0u8, g1.0, g2.0, g1.0 ^ g2.0];
                let translate: u64 = grp.iter().map(|&g| 1u64 << (x ^ g)).sum();
                if translate != inter {
                    translate_ok = false;
                }
            }
        }
    }
    push(
        "syzygetic intersection = 4, azygetic divisible by 3",
        profile_ok
            && constants.syz_intersection == 4
            && constants.azy_intersection % 3 == 0,
        format!(
            "syz={} azy={}",
            constants.syz_intersection, constants.azy_intersection
        ),
    );
    push(
        "syzygetic intersection is a translate of the isotropic four-group",
        translate_ok,
        String::new(),
    );
    push(
        "double count 30·4 + 32·azy = 12·26",
        30 * constants.syz_intersection + 32 * constants.azy_intersection == 12 * 26
            && constants.syz_partners == 30
            && constants.azy_partners == 32,
        format!(
            "30*{} + 32*{} = {}",
            constants.syz_intersection,
            constants.azy_intersection,
            30 * constants.syz_intersection + 32 * constants.azy_intersection
        ),
    );

    // orbit sizes and orientation for every alpha
    let mut orbits_ok = true;
    for &alpha in &classes {
        match orbit_sizes(alpha) {
            Ok((1, 15, 16)) => {}
            _ => orbits_ok = false,
        }
    }
    push(
        "orbit sizes (1,15,16), 6·5/2=15 pair differences, pairing=1 on overlap",
        orbits_ok,
        String::new(),
    );

    // pair statistic separates
    push(
        "pair statistic separates pairs from non-pairs",
        constants.v_pair != constants.v_nonpair,
        format!("v_pair={} v_nonpair={}", constants.v_pair, constants.v_nonpair),
    );

    push(
        "each odd label lies in 27 tuples",
        constants.tuples_per_label == 27,
        format!("{}", constants.tuples_per_label),
    );

    push(
        "Aronhold count",
        constants.aronhold == 288,
        format!("{}", constants.aronhold),
    );
    push(
        "group order constant 63·30·12·8²",
        constants.sp6_order == 1_451_520,
        format!("{}", constants.sp6_order),
    );

    Ok(SelfTestReport { constants, checks })
}
