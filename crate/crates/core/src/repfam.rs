//! Representative set families.
//!
//! A subfamily `Â ⊆ 𝒜` is *q-representative* for `𝒜` when every set `B`
//! with `|B| <= q` that avoids some member of `𝒜` also avoids some member
//! of `Â`. Any inclusion-minimal q-representative subfamily of a family of
//! sets of size at most `p` has at most `C(p+q, p)` members.
//!
//! Two independent routes decide representativeness:
//!
//! * [`is_q_representative`] enumerates every blocker over the family's
//!   element union. It is exact and meant for small test instances.
//! * [`find_blocker`] searches for a blocker with a bounded search tree
//!   (branching on the elements of an un-hit set). [`minimize`] uses it,
//!   so it scales to the families produced inside the distributed
//!   algorithms.

use std::collections::BTreeSet;

use thiserror::Error;

/// Set element; in the distributed algorithms this is a node id.
pub type Elem = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("exhaustive check refused: union of {union} elements with q = {q} exceeds the limit ({max_union} elements, q <= {max_q})")]
    TooLarge {
        union: usize,
        q: usize,
        max_union: usize,
        max_q: usize,
    },
    #[error("subfamily contains a set that is not in the full family")]
    NotSubfamily,
}

/// Limits of the exhaustive checker.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveLimits {
    pub max_union: usize,
    pub max_q: usize,
}

impl Default for ExhaustiveLimits {
    fn default() -> Self {
        ExhaustiveLimits {
            max_union: 20,
            max_q: 6,
        }
    }
}

/// A member set (sorted, distinct elements) with an optional witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member<W> {
    pub set: Vec<Elem>,
    pub witness: Option<W>,
}

/// A family of element sets, each optionally annotated with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily<W = ()> {
    members: Vec<Member<W>>,
}

impl<W> Default for SetFamily<W> {
    fn default() -> Self {
        SetFamily {
            members: Vec::new(),
        }
    }
}

impl<W> SetFamily<W> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a set; duplicates of an existing set are ignored so the first
    /// witness attached to a set is the one kept.
    pub fn push(&mut self, set: impl IntoIterator<Item = Elem>, witness: Option<W>) -> bool {
        let mut set: Vec<Elem> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if self.members.iter().any(|m| m.set == set) {
            return false;
        }
        self.members.push(Member { set, witness });
        true
    }

    pub fn members(&self) -> &[Member<W>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Member<W>> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn sets(&self) -> impl Iterator<Item = &[Elem]> {
        self.members.iter().map(|m| m.set.as_slice())
    }

    pub fn contains_set(&self, set: &[Elem]) -> bool {
        self.members.iter().any(|m| m.set == set)
    }

    /// Union of all member elements.
    pub fn universe(&self) -> BTreeSet<Elem> {
        self.sets().flatten().copied().collect()
    }

    /// Largest member size (`p`).
    pub fn max_set_size(&self) -> usize {
        self.sets().map(<[Elem]>::len).max().unwrap_or(0)
    }

    /// Subfamily of members whose sets satisfy `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&Member<W>) -> bool) {
        self.members.retain(|m| keep(m));
    }
}

impl<W: Ord> SetFamily<W> {
    /// Builds a family from annotated sets; when a set occurs several times
    /// the smallest witness wins. Members come out in ascending set order.
    pub fn from_min_witness(items: impl IntoIterator<Item = (Vec<Elem>, W)>) -> Self {
        let mut best: std::collections::BTreeMap<Vec<Elem>, W> = Default::default();
        for (mut set, w) in items {
            set.sort_unstable();
            set.dedup();
            match best.entry(set) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(w);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    if w < *e.get() {
                        e.insert(w);
                    }
                }
            }
        }
        SetFamily {
            members: best
                .into_iter()
                .map(|(set, w)| Member {
                    set,
                    witness: Some(w),
                })
                .collect(),
        }
    }
}

impl SetFamily<()> {
    pub fn from_sets<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Elem>,
    {
        let mut f = SetFamily::new();
        for s in sets {
            f.push(s, None);
        }
        f
    }
}

/// A set of at most `budget` elements that a member must avoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocker {
    pub elements: Vec<Elem>,
    pub budget: usize,
}

fn disjoint(a: &[Elem], b: &[Elem]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// `C(n, k)` saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exhaustive definition check: for every `B` of size `<= q` drawn from the
/// union of `full`'s elements, if some member of `full` avoids `B` then some
/// member of `sub` does too.
pub fn is_q_representative<W, V>(
    sub: &SetFamily<W>,
    full: &SetFamily<V>,
    q: usize,
) -> Result<bool, RepError> {
    is_q_representative_with(sub, full, q, ExhaustiveLimits::default())
}

pub fn is_q_representative_with<W, V>(
    sub: &SetFamily<W>,
    full: &SetFamily<V>,
    q: usize,
    limits: ExhaustiveLimits,
) -> Result<bool, RepError> {
    if sub.sets().any(|s| !full.contains_set(s)) {
        return Err(RepError::NotSubfamily);
    }
    let universe: Vec<Elem> = full.universe().into_iter().collect();
    if universe.len() > limits.max_union || q > limits.max_q {
        return Err(RepError::TooLarge {
            union: universe.len(),
            q,
            max_union: limits.max_union,
            max_q: limits.max_q,
        });
    }
    let mask = |s: &[Elem]| -> u32 {
        s.iter()
            .map(|e| 1u32 << universe.binary_search(e).expect("element in universe"))
            .fold(0, |a, b| a | b)
    };
    let full_masks: Vec<u32> = full.sets().map(mask).collect();
    let sub_masks: Vec<u32> = sub.sets().map(mask).collect();

    // Enumerate every subset of the universe with at most q elements.
    let mut ok = true;
    let u = universe.len();
    let mut stack: Vec<(u32, usize, usize)> = vec![(0, 0, 0)];
    while let Some((blocker, next, size)) = stack.pop() {
        let full_avoids = full_masks.iter().any(|&m| m & blocker == 0);
        let sub_avoids = sub_masks.iter().any(|&m| m & blocker == 0);
        if full_avoids && !sub_avoids {
            ok = false;
            break;
        }
        if size < q {
            for e in next..u {
                stack.push((blocker | (1 << e), e + 1, size + 1));
            }
        }
    }
    Ok(ok)
}

/// Bounded-search hitting set: some `B`, `|B| <= budget`, disjoint from
/// `avoid` and meeting every set in `hit`.
fn hitting_set(hit: &[&[Elem]], avoid: &[Elem], budget: usize, chosen: &mut Vec<Elem>) -> bool {
    let open = hit.iter().find(|s| disjoint(s, chosen));
    let Some(open) = open else {
        return true;
    };
    if chosen.len() == budget {
        return false;
    }
    for &e in open.iter() {
        if avoid.binary_search(&e).is_ok() {
            continue;
        }
        chosen.push(e);
        chosen.sort_unstable();
        if hitting_set(hit, avoid, budget, chosen) {
            return true;
        }
        let pos = chosen.binary_search(&e).expect("just inserted");
        chosen.remove(pos);
    }
    false
}

/// A blocker of size `<= q` that avoids `member` but meets every set of
/// `others`; its existence means `member` cannot be dropped from
/// `others ∪ {member}` without losing q-representativeness.
pub fn find_blocker(member: &[Elem], others: &[&[Elem]], q: usize) -> Option<Blocker> {
    // A set inside `member` can never be hit by a blocker avoiding `member`.
    if others.iter().any(|s| s.iter().all(|e| member.binary_search(e).is_ok())) {
        return None;
    }
    let mut others: Vec<&[Elem]> = others.to_vec();
    others.sort_by_key(|s| s.len());
    let mut chosen = Vec::new();
    hitting_set(&others, member, q, &mut chosen).then(|| Blocker {
        elements: chosen,
        budget: q,
    })
}

/// Fast representativeness test, equivalent to [`is_q_representative`]
/// but without size limits: `sub` fails iff some member of `full` outside
/// `sub` has a blocker against all of `sub`.
pub fn represents<W, V>(sub: &SetFamily<W>, full: &SetFamily<V>, q: usize) -> bool {
    let kept: Vec<&[Elem]> = sub.sets().collect();
    full.sets()
        .filter(|s| !sub.contains_set(s))
        .all(|s| find_blocker(s, &kept, q).is_none())
}

/// Inclusion-minimal q-representative subfamily of `full`.
///
/// Members are visited in descending lexicographic set order; a member is
/// dropped when no blocker of size `<= q` separates it from the rest of
/// the current family. Surviving members keep their witness and the result
/// lists them in ascending set order.
pub fn minimize<W: Clone>(full: &SetFamily<W>, q: usize) -> SetFamily<W> {
    let mut members: Vec<Member<W>> = full.members.clone();
    members.sort_by(|a, b| a.set.cmp(&b.set));
    let mut alive = vec![true; members.len()];
    for i in (0..members.len()).rev() {
        let others: Vec<&[Elem]> = members
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && alive[j])
            .map(|(_, m)| m.set.as_slice())
            .collect();
        if find_blocker(&members[i].set, &others, q).is_none() {
            alive[i] = false;
        }
    }
    SetFamily {
        members: members
            .into_iter()
            .zip(alive)
            .filter_map(|(m, keep)| keep.then_some(m))
            .collect(),
    }
}

/// Transitivity check on one nested triple `c ⊆ b ⊆ a`: returns whether
/// `(b rep a) ∧ (c rep b) ⇒ (c rep a)` held.
pub fn compose_check<W1, W2, W3>(
    a: &SetFamily<W1>,
    b: &SetFamily<W2>,
    c: &SetFamily<W3>,
    q: usize,
) -> Result<bool, RepError> {
    let b_rep_a = is_q_representative(b, a, q)?;
    let c_rep_b = is_q_representative(c, b, q)?;
    if b_rep_a && c_rep_b {
        is_q_representative(c, a, q)
    } else {
        Ok(true)
    }
}
