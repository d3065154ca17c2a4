from . import bogoliubov, dynamics, optics, projection, fock, witness
