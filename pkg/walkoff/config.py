"Global config file"

DefaultNWorkers = 1
DefaultSeed = 2021
SeedEnvVar = 'WALKOFF_SEED'
MonteCarloBlockSize = 100000
SynthBlockSize = 65536
