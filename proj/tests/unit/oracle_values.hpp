#pragma once

// Generated by tests/oracles/oracles.py; do not edit by hand.

namespace dnstab::oracle {

inline constexpr double kHeatAmplitude64 = 0.37458910655168941885;
inline constexpr double kHeatAmplitude16 = 0.39540463376325345964;
inline constexpr double kStefanB_M2 = 2.0;
inline constexpr double kStefanB_P05 = 0.0;
inline constexpr double kStefanB_P3 = 2.0;
inline constexpr double kPlateauNu_M1 = -1.0;
inline constexpr double kPlateauB_M1 = 0.5;
inline constexpr double kPlateauNu_P15 = 0.0;
inline constexpr double kPlateauB_P15 = 0.0;
inline constexpr double kPlateauNu_P3 = 1.0;
inline constexpr double kPlateauB_P3 = 0.5;
inline constexpr double kMollifiedStefanZeta_M01 = -0.06;
inline constexpr double kMollifiedStefanZeta_P02 = 0.06;
inline constexpr double kMollifiedStefanZeta_P1 = 0.125;
inline constexpr double kMollifiedStefanZeta_P11 = 0.185;
inline constexpr double kMollifiedStefanZeta_P2 = 1.0625;
inline constexpr double kEnergyConstantUnit = 2.8565713714171399992;
inline constexpr double kEnergyConstantHetero = 21.908902300206644538;
inline constexpr double kDualAmplitude0 = -0.004966534710451915159;
inline constexpr double kDualEnergyLhs = 0.00023893656114740356844;
inline constexpr double kWeakMetricSine = 0.3535533905932737622;
inline constexpr double kW1pGapSine16 = 2.2178747071854634015;
inline constexpr double kW1pGapSine16P3 = 2.3571067403770002306;

}  // namespace dnstab::oracle
