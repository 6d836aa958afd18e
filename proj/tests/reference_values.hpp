#pragma once
// Generated by tests/make_reference_values.py; do not edit by hand.

namespace refval {
constexpr double kLimitMassG4R1 = 3.193673375529992343301;
constexpr double kLimitMassG4R4 = 3.996377900312877835014;
constexpr double kLimitMassG3R1 = 5.055744249971730603046;
constexpr double kLimitMassG3R2 = 5.758021418318198485399;
constexpr double kMassG4R1Theta1 = 0.6313899440734522803873;
constexpr double kMassG4R1ThetaQ = 1.429017601788371419208;
constexpr double kDensityG2Theta0R1 = 0.7628739783668901787147;
constexpr double kPhiG1S1 = -1.386294361119890618834;
constexpr double kPhiG2S1 = -1.131971753677420964324;
constexpr double kPhiG4S1 = -1.040259782479897364928;
constexpr double kEntropyEqG4R1Theta1 = -1.261293078639476579243;
constexpr double kEntropyEqG4R1ThetaQ = -1.707458898997930565885;
constexpr double kCondConstG4 = 0.00197793408887348;
constexpr double kCondConstG4ArgP = 1.15;
constexpr double kCondConstG3 = 0.00491289093783388;
constexpr double kCondConstG3ArgP = 0.6;
}  // namespace refval
