// Pattern: P1 basic
// Expected: NoDeadlock
//
// Two goroutines sum halves of the input and send the results on two channels.
package main

import "fmt"

func sum(s []int, c chan int) {
	total := 0
	for _, v := range s {
		total += v
	}
	c <- total
}

func main() {
	a := []int{7, 2, 8}
	b := []int{-9, 4, 0}
	c1 := make(chan int)
	c2 := make(chan int)
	go sum(a, c1)
	go sum(b, c2)
	x, y := <-c1, <-c2
	fmt.Println(x, y, x+y)
}
