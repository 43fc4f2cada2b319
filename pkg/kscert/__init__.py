"""Kochen-Specker measurement certification toolkit.

Modules:
  ks_core         exact KS sets over the Eisenstein integers
  exclusivity     exclusivity graph, independence number, colorability
  theta_sdp       weighted Lovasz theta with certificates
  quantum_model   states, Sigma, noise and corrected bounds
  experiment_sim  photon-counting simulation of the protocol
  cli             command-line entry point
"""
