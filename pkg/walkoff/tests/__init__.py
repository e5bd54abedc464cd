"""Makes walkoff.tests a package so the test data directory resolves relative to it"""
