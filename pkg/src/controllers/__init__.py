# Controllers package - experiment pipeline and command-line surface
