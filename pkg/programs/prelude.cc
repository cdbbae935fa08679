-- The standard prelude, for use with the command-line tool.
use prelude
