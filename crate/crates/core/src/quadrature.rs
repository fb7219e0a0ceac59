//! Globally adaptive 15-point Gauss-Kronrod quadrature for complex integrands.

use num_complex::Complex64;

use crate::sum::CompensatedSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral with its a posteriori error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// One G7/K15 panel. The integrand returns its value and, for nested use,
/// the error estimate of an inner integration, which is integrated with
/// the Kronrod weights and added to the panel error.
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Panel
where
    F: FnMut(f64) -> (Complex64, f64),
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (fc, ec) = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut inner = ec * WGK[7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let (f1, e1) = f(c - h * x);
        let (f2, e2) = f(c + h * x);
        kron += (f1 + f2) * WGK[j];
        inner += (e1 + e2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * h;
    Panel {
        a,
        b,
        value,
        error: ((kron - gauss) * h).norm() + inner * h.abs(),
    }
}

/// Adaptive integration over consecutive panels `breaks[i]..breaks[i+1]`,
/// bisecting the panel with the largest error until the total error is below
/// `max(abs_tol, rel_tol·|I|)` or `max_subdivisions` bisections were spent.
pub fn integrate<F>(mut f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Quadrature
where
    F: FnMut(f64) -> (Complex64, f64),
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut panels: Vec<Panel> = breaks.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();
    let mut evaluations = 15 * panels.len();
    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&panels);
        let target = abs_tol.max(rel_tol * value.norm());
        if error <= target || !error.is_finite() {
            return finish(panels, evaluations, error <= target);
        }
        if subdivisions >= max_subdivisions {
            return finish(panels, evaluations, false);
        }
        let worst = (0..panels.len())
            .max_by(|&i, &j| panels[i].error.total_cmp(&panels[j].error))
            .expect("non-empty");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return finish(panels, evaluations, false);
        }
        panels[worst] = gk15(&mut f, p.a, mid);
        panels.insert(worst + 1, gk15(&mut f, mid, p.b));
        evaluations += 30;
        subdivisions += 1;
    }
}

/// Plain version for integrands without inner error.
pub fn integrate_simple<F>(mut f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Quadrature
where
    F: FnMut(f64) -> Complex64,
{
    integrate(|x| (f(x), 0.0), breaks, abs_tol, rel_tol, max_subdivisions)
}

fn totals(panels: &[Panel]) -> (Complex64, f64) {
    let value = panels.iter().map(|p| p.value).sum::<CompensatedSum>().value();
    let error = panels.iter().map(|p| p.error).sum();
    (value, error)
}

fn finish(panels: Vec<Panel>, evaluations: usize, converged: bool) -> Quadrature {
    let (value, error) = totals(&panels);
    Quadrature {
        value,
        error,
        evaluations,
        converged,
    }
}
