"""
Package: discmeans.common
Command line wiring shared by the application: commands, exit codes,
error handlers, logging and report writers
"""
