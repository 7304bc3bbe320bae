//! Saddle-point analysis of the integral representation of `I(n)`.

mod asymptotics;
mod context;
mod geometry;
mod lemmas;
mod spectral;

pub use context::{f_eval, fprime_eval, fsecond_eval, g_eval, h_eval, phi_log_abs, Logs, SaddleContext, BRANCH_CONVENTION};
pub use geometry::{all_saddle_points, find_t_lambda, find_x0, find_x1_rho, GeometryReport, SaddlePoint, SolveMethod, TINY_RHO};
pub use spectral::{b_lambdas, SpectralData};
pub use asymptotics::{default_line, j_asymptotic, j_quadrature, rate_predicted, rate_predicted_with, re_h_expansion, subsequence_select, JAsymptotic, RateMethod, RatePrediction, SubsequenceReport};
pub use lemmas::{lemma_suite, lemma_suite_with, LemmaReport, Witness, IM_H_MARGIN};
