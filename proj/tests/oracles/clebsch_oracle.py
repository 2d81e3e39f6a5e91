from sympy import *
x,y=symbols('x y')
def diffxy(f,a,b):
    h=f
    for _ in range(a): h=diff(h,x)
    for _ in range(b): h=diff(h,y)
    return h
def ueb(f,g,k,n,m):
    s=sum(binomial(k,j)*(-1)**j*diffxy(f,k-j,j)*diffxy(g,j,k-j) for j in range(k+1))
    return expand(Rational(factorial(n-k)*factorial(m-k),factorial(n)*factorial(m))*s)
def clebsch(fx):
    F=expand(y**6*fx.subs(x,x/y))
    i=ueb(F,F,4,6,6); Delta=ueb(i,i,2,4,4); y1=ueb(F,i,4,6,4); y2=ueb(i,y1,2,4,2); y3=ueb(i,y2,2,4,2)
    return ueb(F,F,6,6,6),ueb(i,i,4,4,4),ueb(i,Delta,4,4,4),ueb(y3,y1,2,2,2)
for f in [x**6-1, x**5-x, x**5-1, (x**3-1)*(x**3-3), x*(x**2-1)*(x**2-4)*(x-7)]:
    A,B,C,D=clebsch(f)
    A11=2*C+A*B/3; A12=Rational(2,3)*(B**2+A*C)
    print(f, (A,B,C,D), '6B-A^2',6*B-A**2,'A11',A11, '6C^2-B^3', 6*C**2-B**3, '3D-2BA11', 3*D-2*B*A11)
