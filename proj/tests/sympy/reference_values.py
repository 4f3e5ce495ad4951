# Reference values for tests/test_manifold.cpp (SympyValues). Runs for a few minutes.
import sympy as sp, itertools
r,s,t,w,x,y,z = X = sp.symbols('r s t w x y z', real=True)
def run(m, l, q0):
    K = 1+m*(w**2+x**2+y**2+z**2)
    F = sp.zeros(7,7)
    for i in range(3): F[i,i]=1
    F[:,3] = sp.Matrix([l*x/2, l*y/2, l*z/2, K,0,0,0])
    F[:,4] = sp.Matrix([-l*w/2, -l*z/2, l*y/2, 0,K,0,0])
    F[:,5] = sp.Matrix([l*z/2, -l*w/2, -l*x/2, 0,0,K,0])
    F[:,6] = sp.Matrix([-l*y/2, l*x/2, -l*w/2, 0,0,0,K])
    Gi = F*F.T
    G = Gi.inv()  # rational
    G = G.applyfunc(sp.cancel)
    sub = dict(zip(X,q0))
    dG = [[[sp.diff(G[i,j],X[k]) for k in range(7)] for j in range(7)] for i in range(7)]
    Gam = [[[sp.Rational(1,2)*sum(Gi[k,q]*(dG[q][j][i]+dG[q][i][j]-dG[i][j][q]) for q in range(7)) for j in range(7)] for i in range(7)] for k in range(7)]
    Gv = [[[Gam[k][i][j].subs(sub) for j in range(7)] for i in range(7)] for k in range(7)]
    dGam = [[[[sp.diff(Gam[k][i][j],X[n]).subs(sub) for n in range(7)] for j in range(7)] for i in range(7)] for k in range(7)]
    # R^k_{s mu nu}
    def Rc(k,sg,mu,nu):
        v = dGam[k][nu][sg][mu] - dGam[k][mu][sg][nu]
        v += sum(Gv[k][mu][lam]*Gv[lam][nu][sg] - Gv[k][nu][lam]*Gv[lam][mu][sg] for lam in range(7))
        return v
    Rup = {}
    for k,sg,mu,nu in itertools.product(range(7),repeat=4):
        if mu<nu: Rup[(k,sg,mu,nu)] = Rc(k,sg,mu,nu)
    def Rup_(k,sg,mu,nu):
        if mu==nu: return 0
        return Rup[(k,sg,mu,nu)] if mu<nu else -Rup[(k,sg,nu,mu)]
    Gq = G.subs(sub); Fq = F.subs(sub)
    # lowered: Rlow[rho,sg,mu,nu] = g_{rho k} R^k_{sg mu nu} = <R(d_mu,d_nu) d_sg, d_rho>
    Rlow = {}
    for rho,sg,mu,nu in itertools.product(range(7),repeat=4):
        Rlow[(rho,sg,mu,nu)] = sum(Gq[rho,k]*Rup_(k,sg,mu,nu) for k in range(7))
    def Rframe(a,b,c,d):  # <R(Xa,Xb)Xd,Xc>
        tot = 0
        for mu,nu,rho,sg in itertools.product(range(7),repeat=4):
            f = Fq[mu,a]*Fq[nu,b]*Fq[rho,c]*Fq[sg,d]
            if f != 0: tot += f*Rlow[(rho,sg,mu,nu)]
        return sp.nsimplify(sp.simplify(tot))
    Ric = sp.zeros(7,7)
    for sg,nu in itertools.product(range(7),repeat=2):
        Ric[sg,nu] = sum(Rup_(k,sg,k,nu) for k in range(7))
    Ricf = Fq.T*Ric*Fq
    S = sum(Gi.subs(sub)[i,j]*Ric[i,j] for i in range(7) for j in range(7))
    out = {}
    for idx in [(0,3,0,3),(3,4,3,4),(3,4,5,6),(0,3,1,4),(5,6,5,6),(0,1,0,1)]:
        out['R%d%d%d%d'%tuple(i+1 for i in idx)] = Rframe(*idx)
    for a,b in [(0,0),(3,3),(3,4),(0,3),(6,6)]:
        out['Ric%d%d'%(a+1,b+1)] = sp.simplify(Ricf[a,b])
    out['S'] = sp.simplify(S)
    out['Gamma_r_wx'] = Gv[0][3][4]
    out['Gamma_w_ww'] = Gv[3][3][3]
    return out
q0 = [sp.Rational(1,10), sp.Rational(-1,5), sp.Rational(3,10), sp.Rational(1,5), sp.Rational(-3,10), sp.Rational(2,5), sp.Rational(1,10)]
for ml in [(1,1),(sp.Rational(-1,2),2)]:
    res = run(ml[0], ml[1], q0)
    print(ml)
    for k,v in res.items(): print(' ', k, sp.nsimplify(v), '%.17g' % float(v))
