namespace lddkit {}
