#ifndef IPMIX_CALIBRATION_HPP
#define IPMIX_CALIBRATION_HPP

// Generated by ipmix_calibrate --samples 1000000 --seed 99537088 (1270 s).
// c0 is half the smallest radius / (1 - theta^2) seen; M = 0 marks the unbounded set.

#include <cmath>
#include <stdexcept>

namespace ipmix::calibration {

struct C0Entry {
  double A;
  double M;
  double min_ratio;
  double c0;
};

inline constexpr C0Entry kC0[] = {
    {-0.80000000000000004, 0, 0.078227990346261322, 0.039113995173130661},
    {-0.80000000000000004, 2, 0.0057192494235313932, 0.0028596247117656966},
    {-0.80000000000000004, 4, 4.7399740058266118e-05, 2.3699870029133059e-05},
    {-0.80000000000000004, 8, 0.001114997514023526, 0.00055749875701176298},
    {-0.5, 0, 0.091059237384762473, 0.045529618692381237},
    {-0.5, 2, 0.0091092412529135205, 0.0045546206264567603},
    {-0.5, 4, 0.0033184845016727671, 0.0016592422508363836},
    {-0.5, 8, 0.00043873676246868406, 0.00021936838123434203},
    {0, 0, 0.12505419804842269, 0.062527099024211344},
    {0, 2, 0.00264139595651636, 0.00132069797825818},
    {0, 4, 0.0094477236892437193, 0.0047238618446218596},
    {0, 8, 0.0068404133875864422, 0.0034202066937932211},
    {0.5, 0, 0.091099731034473636, 0.045549865517236818},
    {0.5, 2, 0.002817346615635364, 0.001408673307817682},
    {0.5, 4, 0.0073929586151127071, 0.0036964793075563536},
    {0.5, 8, 0.0046936330729871528, 0.0023468165364935764},
    {0.80000000000000004, 0, 0.078408289530120176, 0.039204144765060088},
    {0.80000000000000004, 2, 0.0094981380739673354, 0.0047490690369836677},
    {0.80000000000000004, 4, 1.7180451594186042e-05, 8.590225797093021e-06},
    {0.80000000000000004, 8, 0.0076515113585619221, 0.003825755679280961},
};

inline double c0(double A, double M = 0.0) {
  for (const C0Entry& e : kC0)
    if (std::abs(e.A - A) < 1e-12 && std::abs(e.M - M) < 1e-12) return e.c0;
  throw std::out_of_range("no calibrated c0 for this (A, M)");
}

}  // namespace ipmix::calibration

#endif
