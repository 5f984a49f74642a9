# Tests for lazyasp
