use smallvec::SmallVec;

pub type Exps = SmallVec<[u32; 12]>;

/// `v^v · g_0^{e_0} · g_1^{e_1} ⋯` in declaration order. Odd generators carry
/// exponent 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Exps,
    pub v: i64,
}

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Self { exps: SmallVec::from_elem(0, ngens), v: 0 }
    }

    pub fn v_pow(ngens: usize, k: i64) -> Self {
        Self { exps: SmallVec::from_elem(0, ngens), v: k }
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut m = Self::one(ngens);
        m.exps[i] = 1;
        m
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_exponent(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }
}

/// Sign and validity of the product `a · b` of two monomials, given the odd
/// mask of the generators. Returns `None` when an odd generator repeats.
/// `true` means the product picks up a minus sign.
pub fn product_sign(a: &[u32], b: &[u32], odd: &[bool]) -> Option<bool> {
    let mut neg = false;
    // count odd generators of `a` strictly to the right of each odd one in `b`
    let mut odd_in_a_after = 0usize;
    for i in (0..a.len()).rev() {
        if !odd[i] {
            continue;
        }
        if b[i] == 1 {
            if a[i] == 1 {
                return None;
            }
            if odd_in_a_after % 2 == 1 {
                neg = !neg;
            }
        }
        if a[i] == 1 {
            odd_in_a_after += 1;
        }
    }
    Some(neg)
}
