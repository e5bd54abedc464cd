"Baseball and analysis constants"

GhostRunnerFirstSeason = 2020
RegulationInnings = 9
ExtraInningStart = 10

TOP = 0
BOTTOM = 1

BuntModifiers = ('B', 'BG', 'BP', 'BL', 'BGDP', 'BPDP')

TrimLow = 0.1
TrimHigh = 0.9
Covariates = ('ops', 'sac_rate', 'era')
