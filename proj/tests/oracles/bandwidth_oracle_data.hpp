// Generated by tests/oracles/bandwidth_oracle.py; do not edit.
#pragma once

#include <vector>

struct BandwidthOracleCase {
  const char* name;
  std::vector<double> x, y, r;
  double b2, A, B, h;
};

inline constexpr double kOracleSquaredIntegral = 0.2491168901960119;

inline const std::vector<BandwidthOracleCase> kBandwidthOracle = {
    {"fx0", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0},
     {35.0, 74.0, 312.0, 67.0, 408.0, 353.0, 80.0, 139.0, 13.0},
     {1202.0, 1283.0, 3693.0, 716.0, 3175.0, 3208.0, 875.0, 2223.0, 401.0},
     -0.0896567058395031, 6754.282808791616, 0.08931472113323541, 9.456517680819612},
    {"fx1", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0},
     {85.0, 336.0, 389.0, 112.0, 263.0, 365.0, 52.0, 134.0, 123.0, 123.0, 66.0, 32.0},
     {1117.0, 3739.0, 3965.0, 1100.0, 2321.0, 3481.0, 518.0, 1812.0, 2156.0, 2431.0, 2119.0, 1511.0},
     -0.03208723169902771, 9227.122837604273, 0.011439893756745433, 15.181995634968098},
    {"fx2", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0},
     {185.0, 72.0, 99.0, 46.0, 26.0, 140.0},
     {3168.0, 1906.0, 3935.0, 2091.0, 982.0, 2962.0},
     0.13343309405059053, 19422.477749097736, 0.19782656208793045, 9.963318317139118},
    {"fx3", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0},
     {111.0, 31.0, 78.0, 61.0, 78.0, 17.0, 21.0, 9.0},
     {3511.0, 804.0, 1570.0, 1460.0, 2116.0, 482.0, 1760.0, 1018.0},
     -0.08394163226827915, 16996.694105498013, 0.07829108475403339, 11.676977129092935},
    {"fx4", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0},
     {343.0, 293.0, 192.0, 56.0, 132.0, 30.0, 112.0, 35.0, 100.0},
     {2326.0, 3013.0, 2849.0, 1346.0, 2829.0, 770.0, 2659.0, 776.0, 1327.0},
     0.05957289958402189, 8745.657720286124, 0.03943255960942173, 11.727015564463578},
    {"fx5", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0},
     {74.0, 41.0, 166.0, 127.0, 261.0, 196.0, 70.0, 84.0, 34.0, 20.0},
     {1959.0, 678.0, 2054.0, 1452.0, 3375.0, 2908.0, 1877.0, 2927.0, 1788.0, 3784.0},
     -0.07898836754926823, 27691.594466858507, 0.06932402453442549, 13.191459216850514},
    {"fx6", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0},
     {18.0, 32.0, 27.0, 109.0, 114.0, 214.0},
     {2532.0, 1008.0, 382.0, 966.0, 1176.0, 3467.0},
     -0.24810096244397045, 19258.4420873909, 0.6839343062847159, 7.761065570840664},
    {"fx7", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0},
     {91.0, 60.0, 54.0, 62.0, 38.0, 131.0, 29.0, 21.0, 35.0, 7.0},
     {3369.0, 2082.0, 1755.0, 1380.0, 906.0, 3418.0, 859.0, 687.0, 2253.0, 598.0},
     -0.04311431857274982, 16115.326848866289, 0.02065382739991734, 15.081610310054913},
    {"fx8", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0},
     {430.0, 486.0, 283.0, 45.0, 106.0, 56.0, 127.0, 154.0, 164.0, 36.0, 86.0},
     {1281.0, 2489.0, 2455.0, 701.0, 1934.0, 958.0, 3044.0, 3895.0, 3508.0, 684.0, 1232.0},
     0.05714457047582983, 9209.452376176407, 0.03628335483185648, 12.047731332468729},
    {"fx9", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0},
     {83.0, 63.0, 17.0, 38.0, 34.0, 8.0, 91.0},
     {2823.0, 2545.0, 1014.0, 2961.0, 2230.0, 301.0, 3556.0},
     0.07261996671805344, 27953.866815245325, 0.05859621740145767, 13.668298729127192},
};
