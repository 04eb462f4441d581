// Reference values printed by tests/oracles/oracles.py (mpmath, scipy).
#pragma once

namespace oracle {

inline constexpr double kQ_0_1_10_inf = 2.1972245773362193828;
inline constexpr double kMQ_0_1_10_inf = 2.302585092994045684;
inline constexpr double kQ_five = 0.34657359027997265471;
inline constexpr double kMQ_five = 1.282474678730768368;
inline constexpr double kCrRe = 0.73076923076923076923;
inline constexpr double kCrIm = 0.34615384615384615385;
inline constexpr double kCrInfRe = -0.5;
inline constexpr double kCrInfIm = 0.5;
inline constexpr double kAnnulus4First = 2.5767347452283362601;
inline constexpr double kAnnulus4Second = 2.2372528259609139495;
inline constexpr double kAnnulusHalfFirst = -2.7517986202542677626;
inline constexpr double kSystoleLower_0_1_10 = 0.31277127264959099423;
inline constexpr double kSchmutz4 = 1.92484730023841379;
inline constexpr double kSchmutz5 = 2.3858214619860980073;
inline constexpr double kRho10_0 = 0.3678794411714423216;
inline constexpr double kRho10_2 = 3.3109149705429808944;
inline constexpr double kRho10_inf = 27.182818284590452354;
inline constexpr double kEuclidK2_0_1_inf = 105.61327811167918067;
inline constexpr double kEuclidB1_0_1_inf = 0.23419932609727664276;
inline constexpr double kQhatK_q0 = 0.046369226868120036814;
inline constexpr double kJHat_half_i_2 = 2.2242138731565635962;
inline constexpr double kJ_half_i_2 = 1.6337608226671540718;
inline constexpr double kMO_2_m3p1i = 2.8568175721791644321;
inline constexpr double kDfSin2 = 1.0002397537456330232;
inline constexpr double kDfLog2 = 0.88453502322887684858;
inline constexpr double kDfSin2Min = 1.3073323269313207369;
inline constexpr double kEuclidGlued_0p1_m1 = 1.2584799713180467862;
inline constexpr double kEuclidGlued_0p1_3 = 2.9128742779807943464;

}  // namespace oracle
