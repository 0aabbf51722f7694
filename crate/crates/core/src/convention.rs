//! The sign conventions used throughout, in one place.

/// The sign `s` in `dvert j + s i_chi omega = dbar(...)` on shell.
///
/// Fixed once on the harmonic oscillator with `chi = u_t` and then used
/// unchanged for every model.
pub const NOETHER_SIGN: i64 = -1;

/// Human-readable summary of every sign choice, printed by `vps --sign-sheet`.
pub const SIGN_SHEET: &str = "\
Sign conventions
================

Forms
  Generators: contact forms w^a_I = du^a_I - u^a_{I i} dx^i and dx^i, all odd.
  Canonical term: coefficient * w_{K1} ^ ... ^ w_{Kp} ^ dx^{j1} ^ ... ^ dx^{jq},
  contact factors first sorted by (field, graded-lex index), then horizontal
  factors increasing; reordering contributes the permutation sign.
  Volume form d^n x = dx^1 ^ ... ^ dx^n.
  i_k d^n x := i_{d/dx^k} d^n x = (-1)^(k-1) dx^1 ^ .. (omit k) .. ^ dx^n.

Differentials (d = dbar + dvert, d^2 = 0)
  dbar f = D_i f dx^i            dvert f = (d f / d u^a_I) w^a_I
  dbar w^a_I = dx^i ^ w^a_{I i} = -w^a_{I i} ^ dx^i
  dvert w^a_I = 0, dvert dx^i = 0, dbar dx^i = 0
  Both are odd derivations: d(A ^ B) = dA ^ B + (-1)^(p+q of A) A ^ dB,
  and dbar dvert + dvert dbar = 0.

Evolutionary fields
  E_chi = D_I chi^a d/du^a_I.
  i_chi w^a_I = D_I chi^a, i_chi dx^i = 0; i_chi is an odd derivation, so it
  anticommutes with dbar.
  Lie_chi = i_chi dvert + dvert i_chi; it commutes with dbar and dvert and
  acts on functions as E_chi.

Variational objects
  Lagrangian form        L d^n x
  Source form            E(L) = (delta L / delta u^a) w^a ^ d^n x
  Legendre form          dvert(L d^n x) - E(L) = dbar theta
                         built by  g w_{J i} ^ d^n x
                           = -(D_i g) w_J ^ d^n x - dbar(g w_J ^ i_i d^n x),
                         stripping the largest coordinate of the index first.
                         Oscillator L = u_t^2/2 - u^2/2 gives theta = -u_t w.
  Presymplectic current  omega = -dvert theta;  dbar omega + dvert E(L) = 0.
                         Oscillator: omega = w_t ^ w.
  Noether symmetry       i_chi dvert(L d^n x) = dbar sigma
  Noether current        j = sigma + i_chi theta,  dbar j = chi^a E_a d^n x.
                         Oscillator, chi = u_t: j = -u_t^2/2 - u^2/2.
  First Noether theorem  dvert j - i_chi omega is dbar-exact on shell
                         (global sign s = -1).
  Bracket                {j1, j2} = -i_chi1 i_chi2 omega.

Operators
  (Op s)^A = c^A_{a,I} D_I s^a;  (Op^+ q)_a = (-1)^|I| D_I(c^A_{a,I} q_A).
  <q, Op p> - <Op^+ q, p> = dbar G (Green formula).
  Under the pairing beta ^ gamma of (n-q-1)- and (q+1)-forms,
  beta ^ dbar alpha = (-1)^(n-q) dbar beta ^ alpha modulo dbar-exact forms.
";
