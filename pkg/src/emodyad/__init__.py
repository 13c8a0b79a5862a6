"""emodyad - emotional dynamics of two interacting people."""
