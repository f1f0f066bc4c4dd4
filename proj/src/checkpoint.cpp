namespace c2l {}
