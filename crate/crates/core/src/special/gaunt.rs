//! Wigner 3j symbols and Gaunt coefficients.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::special::factorial::ln_factorial;
use crate::types::AngularIndex;

/// Wigner 3j symbol with integer arguments, Racah's single-sum formula
/// evaluated in the log domain with explicit sign tracking.
pub fn wigner_3j(j1: u32, j2: u32, j3: u32, m1: i32, m2: i32, m3: i32) -> f64 {
    let (j1i, j2i, j3i) = (j1 as i64, j2 as i64, j3 as i64);
    let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
    if m1 + m2 + m3 != 0 || m1.abs() > j1i || m2.abs() > j2i || m3.abs() > j3i {
        return 0.0;
    }
    if j3i < (j1i - j2i).abs() || j3i > j1i + j2i {
        return 0.0;
    }
    let lf = |n: i64| ln_factorial(n as u32);
    let ln_delta = lf(j1i + j2i - j3i) + lf(j1i - j2i + j3i) + lf(-j1i + j2i + j3i)
        - lf(j1i + j2i + j3i + 1);
    let ln_pre = 0.5
        * (ln_delta
            + lf(j1i + m1)
            + lf(j1i - m1)
            + lf(j2i + m2)
            + lf(j2i - m2)
            + lf(j3i + m3)
            + lf(j3i - m3));
    let k_min = 0.max(j2i - j3i - m1).max(j1i - j3i + m2);
    let k_max = (j1i + j2i - j3i).min(j1i - m1).min(j2i + m2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = lf(k)
            + lf(j3i - j2i + k + m1)
            + lf(j3i - j1i + k - m2)
            + lf(j1i + j2i - j3i - k)
            + lf(j1i - k - m1)
            + lf(j2i - k + m2);
        let term = (ln_pre - ln_den).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if (j1i - j2i - m3).rem_euclid(2) == 1 {
        -sum
    } else {
        sum
    }
}

/// `∫ dΩ Y_{l2}^{m2*} Y_L^M Y_{l1}^{m1}` for raw integer indices.
///
/// Exactly zero whenever `m2 != M + m1`, the triangle rule fails, any `|m|`
/// exceeds its `l`, or `l1 + L + l2` is odd.
pub fn gaunt_coefficient(l2: u32, m2: i32, big_l: u32, big_m: i32, l1: u32, m1: i32) -> f64 {
    if !selection_allows(l2, m2, big_l, big_m, l1, m1) {
        return 0.0;
    }
    let l_max = l2.max(big_l).max(l1);
    if l_max <= TABLE_L {
        return table().get(l2, m2, big_l, big_m, l1, m1);
    }
    gaunt_direct(l2, m2, big_l, big_m, l1, m1)
}

/// Gaunt coefficient `<l2 m2 | L M | l1 m1>` on validated angular indices.
pub fn gaunt(a: AngularIndex, b: AngularIndex, c: AngularIndex) -> f64 {
    gaunt_coefficient(a.l(), a.m(), b.l(), b.m(), c.l(), c.m())
}

fn selection_allows(l2: u32, m2: i32, big_l: u32, big_m: i32, l1: u32, m1: i32) -> bool {
    m2 == big_m + m1
        && m2.unsigned_abs() <= l2
        && big_m.unsigned_abs() <= big_l
        && m1.unsigned_abs() <= l1
        && (l1 + big_l + l2) % 2 == 0
        && l2 <= l1 + big_l
        && l2 >= l1.abs_diff(big_l)
}

fn gaunt_direct(l2: u32, m2: i32, big_l: u32, big_m: i32, l1: u32, m1: i32) -> f64 {
    let pre = ((2 * l2 + 1) as f64 * (2 * big_l + 1) as f64 * (2 * l1 + 1) as f64 / (4.0 * PI)).sqrt();
    let sign = if m2.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    sign * pre * wigner_3j(l2, big_l, l1, 0, 0, 0) * wigner_3j(l2, big_l, l1, -m2, big_m, m1)
}

/// Largest `l` held in the precomputed table.
const TABLE_L: u32 = 8;

/// Dense table over `(l1, m1, L, M, l2)`; `m2 = M + m1` is implied.
/// Built once, read-only afterwards.
struct GauntTable {
    values: Vec<f64>,
}

const TL: usize = TABLE_L as usize + 1;
const TM: usize = 2 * TABLE_L as usize + 1;

fn table_index(l2: u32, big_l: u32, big_m: i32, l1: u32, m1: i32) -> usize {
    let m1i = (m1 + TABLE_L as i32) as usize;
    let bmi = (big_m + TABLE_L as i32) as usize;
    (((l1 as usize * TM + m1i) * TL + big_l as usize) * TM + bmi) * TL + l2 as usize
}

impl GauntTable {
    fn build() -> Self {
        let mut values = vec![0.0; TL * TM * TL * TM * TL];
        for l1 in 0..=TABLE_L {
            for m1 in -(l1 as i32)..=l1 as i32 {
                for big_l in 0..=TABLE_L {
                    for big_m in -(big_l as i32)..=big_l as i32 {
                        for l2 in 0..=TABLE_L {
                            let m2 = big_m + m1;
                            if selection_allows(l2, m2, big_l, big_m, l1, m1) {
                                values[table_index(l2, big_l, big_m, l1, m1)] =
                                    gaunt_direct(l2, m2, big_l, big_m, l1, m1);
                            }
                        }
                    }
                }
            }
        }
        Self { values }
    }

    fn get(&self, l2: u32, _m2: i32, big_l: u32, big_m: i32, l1: u32, m1: i32) -> f64 {
        self.values[table_index(l2, big_l, big_m, l1, m1)]
    }
}

fn table() -> &'static GauntTable {
    static TABLE: OnceLock<GauntTable> = OnceLock::new();
    TABLE.get_or_init(GauntTable::build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_j_reference() {
        let v = wigner_3j(2, 3, 4, 1, -2, 1);
        assert!((v - 0.19720265943665386809).abs() < 1e-14, "{v}");
        assert_eq!(wigner_3j(1, 1, 1, 0, 0, 0), 0.0);
    }

    #[test]
    fn gaunt_constant_harmonic() {
        let y00 = 1.0 / (4.0 * PI).sqrt();
        assert!((gaunt_coefficient(0, 0, 0, 0, 0, 0) - y00).abs() < 1e-15);
        assert!((gaunt_coefficient(1, 0, 0, 0, 1, 0) - y00).abs() < 1e-15);
    }

    #[test]
    fn gaunt_reference_values() {
        // Exact rational-radical values evaluated to 20 digits.
        assert!((gaunt_coefficient(2, 0, 1, 0, 1, 0) - 0.25231325220201600482).abs() < 1e-14);
        assert!((gaunt_coefficient(3, 1, 2, 1, 3, 0) - 0.059470803871759037151).abs() < 1e-14);
    }

    #[test]
    fn table_and_direct_agree_beyond_cutoff() {
        let a = gaunt_coefficient(9, 1, 2, 1, 9, 0);
        let b = gaunt_direct(9, 1, 2, 1, 9, 0);
        assert_eq!(a, b);
        assert!(a != 0.0);
    }

    #[test]
    fn selection_rules_exhaustive() {
        for l1 in 0..=6u32 {
            for l2 in 0..=6u32 {
                for big_l in 0..=6u32 {
                    for m1 in -(l1 as i32)..=l1 as i32 {
                        for m2 in -(l2 as i32)..=l2 as i32 {
                            for big_m in -(big_l as i32)..=big_l as i32 {
                                let g = gaunt_coefficient(l2, m2, big_l, big_m, l1, m1);
                                let forbidden = m2 != big_m + m1
                                    || l2 > l1 + big_l
                                    || l2 < l1.abs_diff(big_l)
                                    || (l1 + l2 + big_l) % 2 == 1;
                                if forbidden {
                                    assert_eq!(g, 0.0);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        // <l2 m2|L M|l1 m1> = (-1)^M <l1 m1|L -M|l2 m2>
        for l1 in 0..=4u32 {
            for l2 in 0..=4u32 {
                for big_l in 0..=4u32 {
                    for m1 in -(l1 as i32)..=l1 as i32 {
                        for big_m in -(big_l as i32)..=big_l as i32 {
                            let m2 = big_m + m1;
                            if m2.unsigned_abs() > l2 {
                                continue;
                            }
                            let a = gaunt_coefficient(l2, m2, big_l, big_m, l1, m1);
                            let sign = if big_m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                            let b = sign * gaunt_coefficient(l1, m1, big_l, -big_m, l2, m2);
                            assert!((a - b).abs() < 1e-13, "{l2} {m2} {big_l} {big_m} {l1} {m1}");
                        }
                    }
                }
            }
        }
    }
}
