//! Gauss–Kronrod 7/15 rule on [-1, 1].

pub(crate) const NODES: [f64; 15] = [
    -0.991_455_371_120_812_6,
    -0.949_107_912_342_758_5,
    -0.864_864_423_359_769_1,
    -0.741_531_185_599_394_4,
    -0.586_087_235_467_691_1,
    -0.405_845_151_377_397_2,
    -0.207_784_955_007_898_5,
    0.0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];

pub(crate) const KRONROD: [f64; 15] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_92,
    0.104_790_010_322_250_18,
    0.063_092_092_629_978_55,
    0.022_935_322_010_529_22,
];

/// Gauss-7 weights on the shared nodes, zero elsewhere.
pub(crate) const GAUSS: [f64; 15] = [
    0.0,
    0.129_484_966_168_869_7,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.417_959_183_673_469_4,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.129_484_966_168_869_7,
    0.0,
];

/// Nodes and weights mapped to [0, 1].
pub(crate) struct UnitRule {
    pub x: [f64; 15],
    pub wk: [f64; 15],
    pub wg: [f64; 15],
}

pub(crate) const UNIT: UnitRule = {
    let mut x = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    let mut i = 0;
    while i < 15 {
        x[i] = 0.5 * (1.0 + NODES[i]);
        wk[i] = 0.5 * KRONROD[i];
        wg[i] = 0.5 * GAUSS[i];
        i += 1;
    }
    UnitRule { x, wk, wg }
};

/// Pairwise sum of a slice, the fixed reduction order for cell totals.
pub(crate) fn pairwise_sum<const N: usize>(v: &[[f64; N]]) -> [f64; N] {
    match v.len() {
        0 => [0.0; N],
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            let (a, b) = (pairwise_sum(a), pairwise_sum(b));
            let mut out = [0.0; N];
            for i in 0..N {
                out[i] = a[i] + b[i];
            }
            out
        }
    }
}
