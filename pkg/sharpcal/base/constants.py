"""Define constant terms

In order to keep names consistent between reports, files and the command
line, constants are used instead of repeated string literals for report
fields, scenario families and distribution spec types.
"""

ALPHA = "alpha"
ALPHA_DISPERSION = "alpha_dispersion"
AVG_VAR_F = "avg_var_F"
AVG_VAR_G = "avg_var_G"
BIN_HI = "bin_hi"
BIN_LO = "bin_lo"
COUNT = "count"
FORECASTS = "forecasts"
GAP = "gap"
HORIZON = "T"
INDEX = "index"
MARGIN = "margin"
MU = "mu"
MU_DISPERSION = "mu_dispersion"
SCENARIO_ID = "scenario_id"
SUPPORT = "support"
THETA_DEV = "theta_dev"
TRUTHS = "truths"
U_BIN = "u_bin"

# distribution spec types
UNIFORM = "uniform"
NORMAL = "normal"
TABULATED_QUANTILE = "tabulated_quantile"
MIXTURE = "mixture"
TRANSLATED = "translated"
WARPED = "warped"

# scenario families
IDEAL = "ideal"
CLIMATOLOGICAL = "climatological"
COMPENSATED_PAIR = "compensated_pair"
SHIFTED_NEGATIVE = "shifted_negative"
BLOCK_REPEAT = "block_repeat"

ENV_DEFAULT_TOL = "SHARPCAL_DEFAULT_TOL"
