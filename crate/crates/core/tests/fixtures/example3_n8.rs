// exact Laurent coefficients of the N = 8 section, alpha_j = 1/j!, beta = 2
pub const NEAR_ZERO_RM1: [[f64; 8]; 8] = [
    [0.0, 0.0, 0.0, -0.041666666666666664, 0.001736111111111111, 7.2337962962962966e-06, -1.0046939300411523e-08, -9.967201686916193e-13],
    [0.0, 0.0, 0.0, 0.041666666666666664, -0.001736111111111111, -7.2337962962962966e-06, 1.0046939300411523e-08, 9.967201686916193e-13],
    [0.0, 0.0, 0.0, -0.16666666666666666, 0.006944444444444444, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, -0.041666666666666664, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, -0.008333333333333333, 1.1574074074074073e-05, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -0.001388888888888889, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.0001984126984126984],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

pub const NEAR_ZERO_R0: [[f64; 8]; 8] = [
    [1.0, -0.5, 0.25, 0.020833333333333332, -0.0008680555555555555, -3.6168981481481483e-06, 5.023469650205762e-09, 4.983600843458096e-13],
    [0.0, 0.5, -0.25, -0.020833333333333332, 0.0008680555555555555, 3.6168981481481483e-06, -5.023469650205762e-09, -4.983600843458096e-13],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

pub const NEAR_INFINITY_RM1: [[f64; 8]; 8] = [
    [0.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -0.16666666666666666, 0.006944444444444444, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, -0.041666666666666664, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, -0.008333333333333333, 1.1574074074074073e-05, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -0.001388888888888889, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.0001984126984126984],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

pub const NEAR_INFINITY_R0: [[f64; 8]; 8] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

