#pragma once

namespace jscc {

/// Upper tail of the standard normal, Q(x) = P[N(0,1) > x].
double gaussian_q(double x);

/// Leading tail term exp(-x^2/2) / (sqrt(2 pi) x), x > 0. Brackets Q from
/// above: (1 - 1/x^2) * tail <= Q(x) <= tail.
double gaussian_q_tail(double x);

/// Principal branch of the Lambert W function for x > 0, i.e. the w with
/// w e^w = x. Halley iteration from log(1 + x). Throws std::domain_error for
/// x <= 0 or non-finite x.
double lambert_w(double x);

/// W(exp(log_x)) without forming exp(log_x); solves w + ln w = log_x.
/// Valid for any finite log_x.
double lambert_w_of_exp(double log_x);

} // namespace jscc
