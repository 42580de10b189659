#pragma once

// The two 0.5 um model cards verbatim, wrapped in a minimal netlist.
inline const char* kModelCardsNetlist =
    "0.5 um model cards\n"
    " .MODEL CMOSN NMOS LEVEL = 3 TOX = 1.4E-8 NSUB = 1E17\n"
    " GAMMA = 0.5483559 PHI = 0.7 VTO = 0.7640855 DELTA = 3.0541177\n"
    " UO = 662.6984452 ETA = 3.162045E-6 THETA = 0.1013999\n"
    " KP = 1.259355E-4 VMAX = 1.442228E5 KAPPA = 0.3 RSH = 7.513418E-3\n"
    " NFS = 1E12 TPG = 1 XJ = 3E-7 LD = 1E-13 WD = 2.334779E-7\n"
    " CGDO = 2.15E-10 CGSO = 2.15E-10 CGBO = 1E-10 CJ = 4.258447E-4\n"
    " PB = 0.9140376 MJ = 0.435903 CJSW = 3.147465E-10 MJSW = 0.1977689\n"
    "\n"
    ".MODEL CMOSP PMOS LEVEL = 3 TOX = 1.4E-8 NSUB = 1E17\n"
    " GAMMA = 0.6243261 PHI = 0.7 VTO = -0.9444911 DELTA = 0.1118368\n"
    " UO = 250 ETA = 0 THETA = 0.1633973 KP = 3.924644E-5 VMAX = 1E6\n"
    " KAPPA = 30.1015109 RSH = 33.9672594 NFS = 1E12 TPG = -1 XJ = 2E-7\n"
    " LD = 5E-13 WD = 4.11531E-7 CGDO = 2.34E-10 CGSO = 2.34E-10\n"
    " CGBO = 1E-10 CJ = 7.285722E-4 PB = 0.96443 MJ = 0.5\n"
    " CJSW = 2.955161E-10 MJSW = 0.3184873\n"
    ".END\n";

inline constexpr const char* kNmosParamNames[] = {
    "LEVEL", "TOX", "NSUB", "GAMMA", "PHI", "VTO", "DELTA", "UO", "ETA",
    "THETA", "KP", "VMAX", "KAPPA", "RSH", "NFS", "TPG", "XJ", "LD", "WD",
    "CGDO", "CGSO", "CGBO", "CJ", "PB", "MJ", "CJSW", "MJSW"};

inline constexpr double kNmosParamValues[] = {
    3, 1.4E-8, 1E17, 0.5483559, 0.7, 0.7640855, 3.0541177, 662.6984452, 3.162045E-6,
    0.1013999, 1.259355E-4, 1.442228E5, 0.3, 7.513418E-3, 1E12, 1, 3E-7, 1E-13, 2.334779E-7,
    2.15E-10, 2.15E-10, 1E-10, 4.258447E-4, 0.9140376, 0.435903, 3.147465E-10, 0.1977689};

inline constexpr double kPmosParamValues[] = {
    3, 1.4E-8, 1E17, 0.6243261, 0.7, -0.9444911, 0.1118368, 250, 0,
    0.1633973, 3.924644E-5, 1E6, 30.1015109, 33.9672594, 1E12, -1, 2E-7, 5E-13, 4.11531E-7,
    2.34E-10, 2.34E-10, 1E-10, 7.285722E-4, 0.96443, 0.5, 2.955161E-10, 0.3184873};
